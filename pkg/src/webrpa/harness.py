"""Synthetic-site simulator, ground-truth trace recording, and
prefix-prediction benchmarks.

Sites are deterministic functions of a small spec: listing pages with
repeated item blocks, optional search field and go button, optional
pagination via a next element, and optional per-item detail pages. A
Session applies actions with real effects (navigation, data entry), unlike
the angelic simulated execution used for synthesis. Recording a ground-truth
program against a Session yields the action/DOM traces that feed the
benchmarks; prefix benchmarks then measure how early and how reliably the
synthesizer predicts each next action.
"""

from __future__ import annotations

import json
import os
import statistics
import time
from dataclasses import dataclass, field, replace

from .dom import (
    CHILD,
    ConcreteSelector,
    DomNode,
    DomTree,
    EPSILON,
    Step,
    Predicate,
    absolute_selector_of,
    full_text,
    is_valid,
    resolve_selector,
    tree_from_json,
    tree_to_json,
)
from .lang import (
    Action,
    AtomicStatement,
    KeyStep,
    ForEachSelectors,
    ForEachValuePaths,
    Program,
    SelectorsExpr,
    Statement,
    SymbolicSelector,
    SymbolicValuePath,
    ValuePathsExpr,
    While,
    action_from_json,
    action_to_json,
    alpha_equivalent,
    program_from_json,
    program_to_json,
)
from .semantics import (
    Env,
    actions_consistent,
    eval_selector,
    eval_value_path,
    eval_value_paths,
)
from .synthesis import SynthConfig, SynthState, synthesize


class RecordingError(Exception):
    """The ground-truth program hit a selector that is not on the page."""


@dataclass(frozen=True)
class SiteSpec:
    """Deterministic page generator parameters for one synthetic site."""

    name: str
    pages: tuple[int, ...] = ()  # item counts per page (static sites)
    query_pages: tuple[tuple[str, tuple[int, ...]], ...] = ()  # entered value -> page sizes
    item_tag: str = "div"
    item_class: str | None = None
    item_children: tuple[str, ...] = ()  # child element tag per extra field
    header_text: str | None = None  # decoy block of the same tag before the items
    note_after: int | None = None  # decoy block inserted between items
    next_tag: str = "c"
    next_class: str | None = None
    search: bool = False  # render an input field and a go button
    detail_links: bool = False  # each item links to its own detail page
    wrap_items: bool = False  # items live in a container div
    seed: int = 0

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "pages": list(self.pages),
            "query_pages": [[q, list(sizes)] for q, sizes in self.query_pages],
            "item_tag": self.item_tag,
            "item_class": self.item_class,
            "item_children": list(self.item_children),
            "header_text": self.header_text,
            "note_after": self.note_after,
            "next_tag": self.next_tag,
            "next_class": self.next_class,
            "search": self.search,
            "detail_links": self.detail_links,
            "wrap_items": self.wrap_items,
            "seed": self.seed,
        }
        return out

    @staticmethod
    def from_json(obj: dict) -> SiteSpec:
        return SiteSpec(
            name=obj["name"],
            pages=tuple(obj.get("pages", ())),
            query_pages=tuple((q, tuple(sizes)) for q, sizes in obj.get("query_pages", ())),
            item_tag=obj.get("item_tag", "div"),
            item_class=obj.get("item_class"),
            item_children=tuple(obj.get("item_children", ())),
            header_text=obj.get("header_text"),
            note_after=obj.get("note_after"),
            next_tag=obj.get("next_tag", "c"),
            next_class=obj.get("next_class"),
            search=obj.get("search", False),
            detail_links=obj.get("detail_links", False),
            wrap_items=obj.get("wrap_items", False),
            seed=obj.get("seed", 0),
        )


@dataclass(frozen=True)
class _View:
    field_text: str = ""
    query: str | None = None
    page: int = 0
    detail: tuple[int, int] | None = None  # (page, item) when on a detail page


class Session:
    """Live, effectful walk over one synthetic site. Applying an action may
    change the page; the transition function is deterministic and GoBack pops
    the navigation history."""

    def __init__(self, spec: SiteSpec, data=None):
        self.spec = spec
        self.data = data
        self.view = _View()
        self.history: list[_View] = []
        self.scraped: list[str] = []
        self.links: list[str] = []
        self.urls: list[str] = []
        self.downloads = 0
        self.current = self._render()

    # --- page generation ---------------------------------------------------

    def _page_sizes(self) -> tuple[int, ...]:
        if self.spec.search:
            if self.view.query is None:
                return ()
            return dict(self.spec.query_pages).get(self.view.query, ())
        return self.spec.pages

    def _item_text(self, page: int, i: int) -> str:
        q = self.view.query or "x"
        return f"{self.spec.name}-{q}-p{page + 1}-i{i + 1}-s{self.spec.seed}"

    def _item_node(self, page: int, i: int) -> DomNode:
        s = self.spec
        attrs = (("class", s.item_class),) if s.item_class else ()
        children = []
        if s.detail_links:
            children.append(DomNode("a", (("class", "d"), ("href", f"/d/{page}/{i}")),
                                    text="more"))
        for j, spec_tag in enumerate(s.item_children):
            tag, _, cls = spec_tag.partition(".")  # "div.locatorPhone" carries a class
            child_attrs = (("class", cls),) if cls else ()
            children.append(DomNode(tag, child_attrs,
                                    text=f"{self._item_text(page, i)}-{tag}{j + 1}"))
        return DomNode(s.item_tag, attrs, self._item_text(page, i), tuple(children))

    def _render(self) -> DomTree:
        s = self.spec
        view = self.view
        if view.detail is not None:
            page, i = view.detail
            body = DomNode("body", children=(
                DomNode("p", (("class", "detail"),), text=f"detail-{self._item_text(page, i)}"),
            ))
            url = f"https://{s.name}.test/d/{page}/{i}"
        else:
            kids: list[DomNode] = []
            if s.search:
                kids.append(DomNode("input", (("class", "search"),),
                                    text=view.field_text or None))
                kids.append(DomNode("button", (("class", "go"),), text="GO"))
            if s.header_text is not None:
                kids.append(DomNode(s.item_tag, (("class", "banner"),), text=s.header_text))
            sizes = self._page_sizes()
            count = sizes[view.page] if view.page < len(sizes) else 0
            items = [self._item_node(view.page, i) for i in range(count)]
            if s.note_after is not None:
                items.insert(s.note_after, DomNode(s.item_tag, (("class", "note"),),
                                                   text="note"))
            if s.wrap_items:
                kids.append(DomNode("div", (("class", "list"),), children=tuple(items)))
            else:
                kids.extend(items)
            if view.page + 1 < len(sizes):
                attrs = (("class", s.next_class),) if s.next_class else ()
                kids.append(DomNode(s.next_tag, attrs, text="next"))
            body = DomNode("body", children=tuple(kids))
            url = f"https://{s.name}.test/p/{view.page + 1}"
        html = DomNode("html", children=(body,))
        return DomTree(DomNode("#document", children=(html,)), url=url)

    # --- transitions -------------------------------------------------------

    def _navigate(self, view: _View) -> None:
        self.history.append(self.view)
        self.view = view
        self.current = self._render()

    def apply(self, action: Action, entered: str | None = None) -> DomTree:
        """Perform one concrete action; returns the (possibly new) page.
        `entered` supplies the text for EnterData, already fetched from the
        input data."""
        node = None
        if action.selector is not None:
            node = resolve_selector(action.selector, self.current)
            if node is None:
                raise RecordingError(f"{action.kind} target {action.selector} not on page")
        kind = action.kind
        if kind == "Click":
            cls = node.attr("class")
            if node.tag == self.spec.next_tag and cls == self.spec.next_class:
                self._navigate(replace(self.view, page=self.view.page + 1))
            elif cls == "go":
                self._navigate(_View(field_text=self.view.field_text,
                                     query=self.view.field_text, page=0))
            elif cls == "d" and node.attr("href"):
                _, page, i = node.attr("href").rsplit("/", 2)
                self._navigate(replace(self.view, detail=(int(page), int(i))))
        elif kind == "EnterData":
            if node.tag == "input":
                self.view = replace(self.view, field_text=entered if entered is not None else "")
                self.current = self._render()
        elif kind == "SendKeys":
            if node.tag == "input":
                self.view = replace(self.view, field_text=action.text or "")
                self.current = self._render()
        elif kind == "ScrapeText":
            self.scraped.append(full_text(node))
        elif kind == "ScrapeLink":
            self.links.append(node.attr("href") or "")
        elif kind == "Download":
            self.downloads += 1
        elif kind == "ExtractURL":
            self.urls.append(self.current.url or "")
        elif kind == "GoBack":
            if self.history:
                self.view = self.history.pop()
                self.current = self._render()
        return self.current


class _RecordingCap(Exception):
    pass


def record_ground_truth(program: Program, spec: SiteSpec, data=None, cap: int = 500,
                        absolute: bool = True) -> tuple[tuple[Action, ...], tuple[DomTree, ...]]:
    """Run a program against a live Session, recording the page before each
    action and the action itself (selectors rewritten to absolute paths by
    default, as a browser-side recorder would emit them). The trace is
    truncated at `cap` actions; the final page is appended so the DOM trace
    is one longer than the action trace."""
    from .semantics import get_value

    session = Session(spec, data)
    actions: list[Action] = []
    doms: list[DomTree] = [session.current]

    def perform(action: Action, entered: str | None = None) -> None:
        page = session.current
        recorded = action
        if absolute and action.selector is not None:
            node = resolve_selector(action.selector, page)
            if node is None:
                raise RecordingError(f"{action.kind} target {action.selector} not on page")
            recorded = replace(action, selector=absolute_selector_of(node, page))
        actions.append(recorded)
        session.apply(action, entered=entered)
        doms.append(session.current)
        if len(actions) >= cap:
            raise _RecordingCap

    def run(statements, env: Env) -> Env:
        for stmt in statements:
            env = step(stmt, env)
        return env

    def step(stmt: Statement, env: Env) -> Env:
        if isinstance(stmt, AtomicStatement):
            selector = None if stmt.selector is None else eval_selector(stmt.selector, env)
            value_path = None
            entered = None
            if stmt.value_path is not None:
                value_path = eval_value_path(stmt.value_path, env)
                entered = str(get_value(data, value_path))
            perform(Action(stmt.kind, selector=selector, text=stmt.text,
                           value_path=value_path), entered=entered)
            return env
        if isinstance(stmt, ForEachSelectors):
            anchor = eval_selector(stmt.source.anchor, env)
            i = 1
            while True:
                selector = stmt.source.nth(anchor, i)
                if not is_valid(selector, session.current):
                    return env
                env = run(stmt.body.statements, env.bind_selector(stmt.var, selector))
                i += 1
        if isinstance(stmt, ForEachValuePaths):
            for path in eval_value_paths(stmt.source, env):
                env = run(stmt.body.statements, env.bind_value_path(stmt.var, path))
            return env
        if isinstance(stmt, While):
            while True:
                env = run(stmt.body.statements, env)
                selector = eval_selector(stmt.click.selector, env)
                if not is_valid(selector, session.current):
                    return env
                perform(Action("Click", selector=selector))
        raise TypeError(f"not a statement: {stmt!r}")

    try:
        run(program.statements, Env(data=data))
    except _RecordingCap:
        pass
    return tuple(actions), tuple(doms)


# --- fixtures ---------------------------------------------------------------------

@dataclass(frozen=True)
class Fixture:
    """One benchmark: a site, its intended program, the recorded traces, and
    the prefix index from which every prediction test must succeed."""

    name: str
    spec: SiteSpec
    program: Program
    input_data: object | None
    generalizes_after: int
    needs_alt_selectors: bool
    actions: tuple[Action, ...]
    doms: tuple[DomTree, ...]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "site": self.spec.to_json(),
            "intended_program": program_to_json(self.program),
            "generalizes_after": self.generalizes_after,
            "needs_alt_selectors": self.needs_alt_selectors,
            "trace": {
                "input_data": self.input_data,
                "actions": [action_to_json(a) for a in self.actions],
                "doms": [tree_to_json(t) for t in self.doms],
            },
        }

    @staticmethod
    def from_json(obj: dict) -> Fixture:
        trace = obj["trace"]
        return Fixture(
            name=obj["name"],
            spec=SiteSpec.from_json(obj["site"]),
            program=program_from_json(obj["intended_program"]),
            input_data=trace.get("input_data"),
            generalizes_after=obj["generalizes_after"],
            needs_alt_selectors=obj.get("needs_alt_selectors", False),
            actions=tuple(action_from_json(a) for a in trace["actions"]),
            doms=tuple(tree_from_json(t) for t in trace["doms"]),
        )


def _atomic(kind: str, selector: ConcreteSelector | None = None, text: str | None = None,
            value_path=None) -> AtomicStatement:
    sel = None if selector is None else SymbolicSelector(None, selector.steps)
    return AtomicStatement(kind, selector=sel, text=text, value_path=value_path)


def _var_sel(var: str, *steps) -> SymbolicSelector:
    return SymbolicSelector(var, tuple(steps))


def _dscts(var: str, pred: Predicate, body: list[Statement],
           anchor: SymbolicSelector | None = None) -> ForEachSelectors:
    return ForEachSelectors(var, SelectorsExpr("Dscts", anchor or SymbolicSelector(None), pred),
                            Program(tuple(body)))


def _children(var: str, anchor: ConcreteSelector, pred: Predicate,
              body: list[Statement]) -> ForEachSelectors:
    return ForEachSelectors(var, SelectorsExpr("Children", SymbolicSelector(None, anchor.steps),
                                               pred), Program(tuple(body)))


BODY = EPSILON.child("html").child("body")


def example_pagination_site(page_sizes=(20, 20, 9), seed: int = 0) -> tuple[SiteSpec, Program]:
    """The canonical paginated scrape: pages of `a` items (each with a `b`
    child) plus a `c` next element; the intended program is a while loop
    around a two-statement descendant loop."""
    spec = SiteSpec(name="pagination", pages=tuple(page_sizes), item_tag="a",
                    item_children=("b",), next_tag="c", seed=seed)
    loop = _dscts("r", Predicate("a"), [
        AtomicStatement("ScrapeText", selector=_var_sel("r")),
        AtomicStatement("ScrapeText", selector=_var_sel("r", Step(CHILD, Predicate("b"), 1))),
    ])
    program = Program((
        While(Program((loop,)), _atomic("Click", BODY.child("c"))),
    ))
    return spec, program


def generate_fixture_suite(seed: int = 0) -> tuple[Fixture, ...]:
    """A deterministic set of benchmarks covering every loop form: plain and
    class-anchored selector loops, pagination, data entry, a three-level
    nest, constant keystrokes, detail-page navigation with GoBack, and
    sibling (child-axis) iteration."""
    def child_step(tag: str, i: int = 1) -> Step:
        return Step(CHILD, Predicate(tag), i)

    fixtures: list[Fixture] = []

    def add(name: str, spec: SiteSpec, program: Program, data, k_star: int,
            needs_alt: bool, cap: int = 500, absolute: bool = True) -> None:
        actions, doms = record_ground_truth(program, spec, data, cap=cap, absolute=absolute)
        fixtures.append(Fixture(name, spec, program, data, k_star, needs_alt, actions, doms))

    # 1. Single descendant loop with a two-statement body.
    spec = SiteSpec(name="single-loop", pages=(5,), item_tag="a", item_children=("b",),
                    seed=seed)
    program = Program((_dscts("r", Predicate("a"), [
        AtomicStatement("ScrapeText", selector=_var_sel("r")),
        AtomicStatement("ScrapeText", selector=_var_sel("r", child_step("b"))),
    ]),))
    add("single-loop", spec, program, None, 3, False)

    # 2. Items distinguishable only by class: a banner div precedes them, so
    # absolute per-tag indices never start at 1.
    spec = SiteSpec(name="class-anchored", pages=(5,), item_tag="div", item_class="item",
                    header_text="banner", seed=seed)
    program = Program((_dscts("r", Predicate("div", ("class", "item")), [
        AtomicStatement("ScrapeText", selector=_var_sel("r")),
    ]),))
    add("class-anchored", spec, program, None, 2, True)

    # 3. Pagination: while + inner loop, small pages for the benchmark suite.
    spec = SiteSpec(name="pagination", pages=(4, 4, 2), item_tag="a", item_children=("b",),
                    next_tag="c", seed=seed)
    program = Program((While(
        Program((_dscts("r", Predicate("a"), [
            AtomicStatement("ScrapeText", selector=_var_sel("r")),
            AtomicStatement("ScrapeText", selector=_var_sel("r", child_step("b"))),
        ]),)),
        _atomic("Click", BODY.child("c")),
    ),))
    add("pagination", spec, program, None, 10, False)

    # 4. Data entry: loop over input rows, search, scrape each result list.
    data = {"rows": [{"name": f"alpha{seed}"}, {"name": f"beta{seed}"},
                     {"name": f"gamma{seed}"}, {"name": f"delta{seed}"}]}
    spec = SiteSpec(name="data-entry", item_tag="div", item_class="res", search=True,
                    query_pages=tuple((row["name"], (3,)) for row in data["rows"]), seed=seed)
    program = Program((ForEachValuePaths(
        "d", ValuePathsExpr(SymbolicValuePath(None, (KeyStep("rows"),))),
        Program((
            AtomicStatement("EnterData", selector=SymbolicSelector(None, BODY.child("input").steps),
                            value_path=SymbolicValuePath("d", (KeyStep("name"),))),
            _atomic("Click", BODY.child("button")),
            _dscts("r", Predicate("div", ("class", "res")), [
                AtomicStatement("ScrapeText", selector=_var_sel("r")),
            ]),
        )),
    ),))
    add("data-entry", spec, program, data, 6, False)

    # 5. Three-level nest: values > pages > items.
    data5 = {"zips": [f"11{seed}", f"22{seed}"]}
    spec = SiteSpec(name="three-level", item_tag="div", item_class="store", search=True,
                    next_tag="button", next_class="next",
                    query_pages=((data5["zips"][0], (3, 2)), (data5["zips"][1], (2, 2))),
                    seed=seed)
    program = Program((ForEachValuePaths(
        "d", ValuePathsExpr(SymbolicValuePath(None, (KeyStep("zips"),))),
        Program((
            AtomicStatement("EnterData", selector=SymbolicSelector(None, BODY.child("input").steps),
                            value_path=SymbolicValuePath("d")),
            _atomic("Click", BODY.child("button")),
            While(
                Program((_dscts("r", Predicate("div", ("class", "store")), [
                    AtomicStatement("ScrapeText", selector=_var_sel("r")),
                ]),)),
                _atomic("Click", BODY.child("button", 2)),
            ),
        )),
    ),))
    add("three-level", spec, program, data5, 9, False)

    # 6. Constant keystrokes before a loop.
    spec = SiteSpec(name="sendkeys", item_tag="div", item_class="res", search=True,
                    query_pages=(("shoes", (4,)),), seed=seed)
    program = Program((
        AtomicStatement("SendKeys", selector=SymbolicSelector(None, BODY.child("input").steps),
                        text="shoes"),
        _atomic("Click", BODY.child("button")),
        _dscts("r", Predicate("div", ("class", "res")), [
            AtomicStatement("ScrapeText", selector=_var_sel("r")),
        ]),
    ))
    add("sendkeys", spec, program, None, 4, False)

    # 7. Detail-page navigation: click into each item, scrape, go back.
    spec = SiteSpec(name="goback", pages=(4,), item_tag="div", item_class="row",
                    detail_links=True, seed=seed)
    program = Program((_dscts("r", Predicate("a", ("class", "d")), [
        AtomicStatement("Click", selector=_var_sel("r")),
        _atomic("ScrapeText", BODY.child("p")),
        AtomicStatement("GoBack"),
    ]),))
    add("goback", spec, program, None, 4, False)

    # 8. Sibling iteration over a container's direct children.
    spec = SiteSpec(name="children-sibling", pages=(5,), item_tag="span", wrap_items=True,
                    seed=seed)
    program = Program((_children("r", BODY.child("div"), Predicate("span"), [
        AtomicStatement("ScrapeText", selector=_var_sel("r")),
    ]),))
    add("children-sibling", spec, program, None, 2, False)

    # 9. Ambiguity: a decoy note sits between the class-tagged rows, so the
    # tag-indexed loop and the class loop diverge on the third prediction.
    spec = SiteSpec(name="ambiguous-rows", pages=(5,), item_tag="div", item_class="row",
                    note_after=2, seed=seed)
    program = Program((_dscts("r", Predicate("div", ("class", "row")), [
        AtomicStatement("ScrapeText", selector=_var_sel("r")),
    ]),))
    add("ambiguous-rows", spec, program, None, 2, True)

    # 10. Store locator: data entry plus a two-field cell scrape.
    data10 = {"zips": [f"49{seed}01", f"98{seed}01"]}
    spec = SiteSpec(name="store-locator", item_tag="div", item_class="locatorCell",
                    item_children=("div.locatorAddress", "div.locatorPhone"), search=True,
                    query_pages=((data10["zips"][0], (5,)), (data10["zips"][1], (4,))),
                    seed=seed)
    program = Program((ForEachValuePaths(
        "d", ValuePathsExpr(SymbolicValuePath(None, (KeyStep("zips"),))),
        Program((
            AtomicStatement("EnterData", selector=SymbolicSelector(None, BODY.child("input").steps),
                            value_path=SymbolicValuePath("d")),
            _atomic("Click", BODY.child("button")),
            _dscts("r", Predicate("div", ("class", "locatorCell")), [
                AtomicStatement("ScrapeText", selector=_var_sel("r", child_step("div", 1))),
                AtomicStatement("ScrapeText", selector=_var_sel("r", child_step("div", 2))),
            ]),
        )),
    ),))
    add("store-locator", spec, program, data10, 13, True)

    return tuple(fixtures)


def write_fixture_files(fixtures, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for fx in fixtures:
        path = os.path.join(outdir, f"{fx.name}.json")
        with open(path, "w") as fh:
            json.dump(fx.to_json(), fh, indent=2)
            fh.write("\n")
        paths.append(path)
    return paths


def read_fixture_files(directory: str) -> list[Fixture]:
    fixtures = []
    for name in sorted(os.listdir(directory)):
        if name.endswith(".json"):
            with open(os.path.join(directory, name)) as fh:
                fixtures.append(Fixture.from_json(json.load(fh)))
    return fixtures


# --- prefix benchmarks -----------------------------------------------------------

@dataclass
class BenchmarkReport:
    name: str
    n_tests: int
    n_answered: int
    n_correct: int
    accuracy: float
    post_prefix: int | None
    post_accuracy: float | None
    time_quartiles: tuple[float, float, float] | None
    mean_test_time: float
    max_test_time: float
    timeouts: int
    intended_found: bool
    intended_first_prefix: int | None
    wall_time_s: float
    per_test: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "name", "n_tests", "n_answered", "n_correct", "accuracy", "post_prefix",
            "post_accuracy", "mean_test_time", "max_test_time", "timeouts",
            "intended_found", "intended_first_prefix", "wall_time_s")}
        out["time_quartiles"] = list(self.time_quartiles) if self.time_quartiles else None
        out["per_test"] = self.per_test
        return out

    def row(self) -> str:
        quart = ("-" if self.time_quartiles is None else
                 "/".join(f"{q * 1000:.0f}" for q in self.time_quartiles))
        post = "-" if self.post_accuracy is None else f"{self.post_accuracy:.0%}"
        first = "-" if self.intended_first_prefix is None else str(self.intended_first_prefix)
        return (f"{self.name:<18} {self.n_tests:>5} {self.accuracy:>7.0%} {post:>6} "
                f"{quart:>12} {'yes' if self.intended_found else 'no':>8} {first:>6}")

    @staticmethod
    def header() -> str:
        return (f"{'benchmark':<18} {'tests':>5} {'acc':>7} {'post':>6} "
                f"{'q1/med/q3 ms':>12} {'intended':>8} {'at':>6}")


def run_prefix_benchmark(actions, doms, data=None, *, config: SynthConfig = SynthConfig(),
                         timeout_s: float = 1.0, intended: Program | None = None,
                         generalizes_after: int | None = None,
                         name: str = "trace") -> BenchmarkReport:
    """For every proper prefix of the trace, predict the next action and check
    it against the actually recorded one on the page it was performed on.

    Mirrors the interactive workflow: while the previous prediction was
    confirmed, the programs found so far keep producing the next prediction
    without re-synthesis; as soon as a prediction fails (or none exists), the
    synthesizer runs again, resuming from its carried worklist state unless
    the config disables incrementality."""
    from .lang import canonical_form
    from .semantics import generalizes, prediction_group_key

    actions = tuple(actions)
    doms = tuple(doms)
    if len(doms) != len(actions) + 1:
        raise ValueError("need one more DOM than actions")
    if len(actions) < 2:
        raise ValueError("need at least two actions to form a prefix test")

    cfg = replace(config, budget_s=timeout_s)
    state: SynthState | None = None
    carried: list[Program] = []
    prev_ok = False
    per_test: list[dict] = []
    times: list[float] = []
    correct_flags: list[bool] = []
    timeouts = 0
    intended_at: int | None = None
    wall_start = time.monotonic()

    for k in range(1, len(actions)):
        t0 = time.monotonic()
        prefix, window = actions[:k], doms[: k + 1]
        predictions = None
        synthesized = False
        if cfg.incremental and prev_ok and carried:
            reused = []
            groups = set()
            for program in carried[:8]:
                pred = generalizes(program, prefix, window, data,
                                   program_key=canonical_form(program))
                if pred is None:
                    continue
                group = prediction_group_key(pred, window[-1])
                if group not in groups:
                    groups.add(group)
                    reused.append(pred)
            if reused:
                predictions = reused
        if predictions is None:
            result = synthesize(prefix, window, data, cfg,
                                state=state if cfg.incremental else None)
            synthesized = True
            if cfg.incremental:
                state = result.state
            if result.stats.get("timed_out"):
                timeouts += 1
            carried = result.programs
            predictions = result.predictions
        dt = time.monotonic() - t0
        answered = bool(predictions)
        ok = answered and any(
            actions_consistent(p.action, actions[k], doms[k]) for p in predictions)
        if answered:
            times.append(dt)
        correct_flags.append(ok)
        prev_ok = ok
        if intended is not None and intended_at is None:
            if any(alpha_equivalent(p, intended) for p in carried):
                intended_at = k
        per_test.append({"k": k, "answered": answered, "correct": ok,
                         "synthesized": synthesized, "time_s": round(dt, 4),
                         "predictions": len(predictions)})

    n_tests = len(correct_flags)
    n_correct = sum(correct_flags)
    post_acc = None
    if generalizes_after is not None:
        post = correct_flags[generalizes_after - 1:]
        post_acc = (sum(post) / len(post)) if post else None
    quartiles = None
    if len(times) >= 2:
        q = statistics.quantiles(times, n=4)
        quartiles = (q[0], q[1], q[2])
    all_times = [t["time_s"] for t in per_test]
    return BenchmarkReport(
        name=name,
        n_tests=n_tests,
        n_answered=len(times),
        n_correct=n_correct,
        accuracy=n_correct / n_tests,
        post_prefix=generalizes_after,
        post_accuracy=post_acc,
        time_quartiles=quartiles,
        mean_test_time=sum(all_times) / len(all_times),
        max_test_time=max(all_times),
        timeouts=timeouts,
        intended_found=intended_at is not None,
        intended_first_prefix=intended_at,
        wall_time_s=time.monotonic() - wall_start,
        per_test=per_test,
    )


def run_fixture_benchmark(fixture: Fixture, *, config: SynthConfig = SynthConfig(),
                          timeout_s: float = 1.0) -> BenchmarkReport:
    return run_prefix_benchmark(
        fixture.actions, fixture.doms, fixture.input_data, config=config,
        timeout_s=timeout_s, intended=fixture.program,
        generalizes_after=fixture.generalizes_after, name=fixture.name)
