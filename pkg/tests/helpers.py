"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from webrpa.dom import CHILD, DESC, ConcreteSelector, DomNode, DomTree, Predicate, Step
from webrpa.lang import (
    AtomicStatement,
    ConcreteValuePath,
    ForEachSelectors,
    ForEachValuePaths,
    IndexStep,
    KeyStep,
    Program,
    SelectorsExpr,
    SymbolicSelector,
    SymbolicValuePath,
    ValuePathsExpr,
    While,
)


def el(tag: str, *children: DomNode, text: str | None = None, **attrs) -> DomNode:
    """Terse element builder; attrs keyword `cls` maps to the class attribute."""
    pairs = tuple(("class" if k == "cls" else k, v) for k, v in attrs.items())
    return DomNode(tag, pairs, text, tuple(children))


def page(*body_children: DomNode, url: str | None = None) -> DomTree:
    return DomTree(el("#document", el("html", el("body", *body_children))), url=url)


def link_page(n: int, with_next: bool = False, n_sub: int = 1) -> DomTree:
    """A page of `a` items each holding a `b` child, plus an optional `c`
    next element. Matches the canonical pagination example's shape."""
    kids = [el("a", *[el("b", text=f"sub{i}-{j}") for j in range(n_sub)], text=f"item{i}")
            for i in range(n)]
    if with_next:
        kids.append(el("c", text="next"))
    return page(*kids)


# --- hypothesis strategies ---------------------------------------------------

TAGS = ("a", "b", "div", "span")


@st.composite
def dom_nodes(draw, depth: int = 3):
    tag = draw(st.sampled_from(TAGS))
    attrs = {}
    if draw(st.booleans()):
        attrs["cls"] = draw(st.sampled_from(("x", "y")))
    text = draw(st.one_of(st.none(), st.sampled_from(("t1", "t2", ""))))
    children = ()
    if depth > 0:
        children = tuple(draw(st.lists(dom_nodes(depth=depth - 1), max_size=3)))
    return el(tag, *children, text=text, **attrs)


@st.composite
def dom_trees(draw):
    body = tuple(draw(st.lists(dom_nodes(depth=2), min_size=0, max_size=4)))
    return page(*body)


@st.composite
def selectors(draw, max_steps: int = 3):
    steps = []
    for _ in range(draw(st.integers(0, max_steps))):
        axis = draw(st.sampled_from((CHILD, DESC)))
        tag = draw(st.sampled_from(TAGS + ("html", "body")))
        attr = None
        if draw(st.booleans()):
            attr = ("class", draw(st.sampled_from(("x", "y"))))
        steps.append(Step(axis, Predicate(tag, attr), draw(st.integers(1, 3))))
    return ConcreteSelector(tuple(steps))


SAMPLE_DATA = {
    "rows": [{"name": "ada", "mail": "a@x"}, {"name": "bob", "mail": "b@x"},
             {"name": "cyd", "mail": "c@x"}],
    "zips": ["11111", "22222"],
    "limit": 3,
}


@st.composite
def value_paths(draw, valid_in_data: bool = False):
    if valid_in_data:
        root = draw(st.sampled_from(("rows", "zips")))
        steps: list = [KeyStep(root)]
        if root == "rows" and draw(st.booleans()):
            steps.append(IndexStep(draw(st.integers(1, 3))))
            if draw(st.booleans()):
                steps.append(KeyStep(draw(st.sampled_from(("name", "mail")))))
        return ConcreteValuePath(tuple(steps))
    steps = []
    for _ in range(draw(st.integers(0, 3))):
        if draw(st.booleans()):
            steps.append(KeyStep(draw(st.sampled_from(("k", "rows", "it's")))))
        else:
            steps.append(IndexStep(draw(st.integers(1, 5))))
    return ConcreteValuePath(tuple(steps))


@st.composite
def atomic_statements(draw, sel_vars: tuple[str, ...], vp_vars: tuple[str, ...],
                      data_valid: bool = False):
    kind = draw(st.sampled_from(("Click", "ScrapeText", "ScrapeLink", "Download",
                                 "GoBack", "ExtractURL", "SendKeys", "EnterData")))
    sel = None
    if kind not in ("GoBack", "ExtractURL"):
        head = draw(st.sampled_from((None,) + sel_vars)) if sel_vars else None
        base = draw(selectors(max_steps=2))
        sel = SymbolicSelector(head, base.steps)
    text = "hello" if kind == "SendKeys" else None
    vp = None
    if kind == "EnterData":
        head = draw(st.sampled_from((None,) + vp_vars)) if vp_vars else None
        base = draw(value_paths(valid_in_data=data_valid and head is None))
        vp = SymbolicValuePath(head, base.steps)
    return AtomicStatement(kind, selector=sel, text=text, value_path=vp)


@st.composite
def statements(draw, depth: int, sel_vars: tuple[str, ...] = (),
               vp_vars: tuple[str, ...] = (), counter: list | None = None,
               data_valid: bool = False):
    counter = counter if counter is not None else [0]
    choice = draw(st.integers(0, 9))
    if depth == 0 or choice < 6:
        return draw(atomic_statements(sel_vars, vp_vars, data_valid))
    counter[0] += 1
    var = f"g{counter[0]}"
    if choice < 8:
        anchor_head = draw(st.sampled_from((None,) + sel_vars)) if sel_vars else None
        anchor = SymbolicSelector(anchor_head, draw(selectors(max_steps=1)).steps)
        pred = Predicate(draw(st.sampled_from(TAGS)))
        kind = draw(st.sampled_from(("Children", "Dscts")))
        body = draw(programs(depth - 1, sel_vars + (var,), vp_vars, counter, data_valid))
        return ForEachSelectors(var, SelectorsExpr(kind, anchor, pred), body)
    if choice == 8:
        if data_valid:
            path = SymbolicValuePath(None, (KeyStep(draw(st.sampled_from(("rows", "zips")))),))
        else:
            path = SymbolicValuePath(None, draw(value_paths()).steps)
        body = draw(programs(depth - 1, sel_vars, vp_vars + (var,), counter, data_valid))
        return ForEachValuePaths(var, ValuePathsExpr(path), body)
    body = draw(programs(depth - 1, sel_vars, vp_vars, counter, data_valid))
    click_sel = SymbolicSelector(draw(st.sampled_from((None,) + sel_vars)) if sel_vars else None,
                                 draw(selectors(max_steps=2)).steps)
    return While(body, AtomicStatement("Click", selector=click_sel))


@st.composite
def programs(draw, depth: int = 2, sel_vars: tuple[str, ...] = (),
             vp_vars: tuple[str, ...] = (), counter: list | None = None,
             data_valid: bool = False):
    counter = counter if counter is not None else [0]
    n = draw(st.integers(1, 3))
    return Program(tuple(
        draw(statements(depth, sel_vars, vp_vars, counter, data_valid)) for _ in range(n)))
