"""Immutable DOM snapshots and the XPath-subset selectors that address them.

A snapshot is a tree of element nodes with ordered attributes and optional
text. Selectors are sequences of child/descendant steps with tag or
tag-plus-attribute predicates and 1-based indices; the empty selector
denotes the root. Node identity within one tree is a preorder integer id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Iterator

CHILD = "child"
DESC = "desc"


class SelectorParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Predicate:
    """Node test: a tag, optionally constrained by one attribute value."""

    tag: str
    attr: tuple[str, str] | None = None

    def __post_init__(self):
        if not self.tag:
            raise ValueError("predicate tag must be non-empty")

    def matches(self, node: DomNode) -> bool:
        if node.tag != self.tag:
            return False
        if self.attr is None:
            return True
        name, value = self.attr
        return node.attr(name) == value

    def __str__(self) -> str:
        if self.attr is None:
            return self.tag
        name, value = self.attr
        return f"{self.tag}[@{name}='{_escape(value)}']"


@dataclass(frozen=True)
class Step:
    axis: str  # CHILD or DESC
    pred: Predicate
    index: int  # 1-based

    def __post_init__(self):
        if self.axis not in (CHILD, DESC):
            raise ValueError(f"unknown axis {self.axis!r}")
        if self.index < 1:
            raise ValueError("step index must be >= 1")

    def __str__(self) -> str:
        lead = "/" if self.axis == CHILD else "//"
        return f"{lead}{self.pred}[{self.index}]"


@dataclass(frozen=True)
class ConcreteSelector:
    """Variable-free selector path; the empty path addresses the root."""

    steps: tuple[Step, ...] = ()

    def __str__(self) -> str:
        return "".join(str(s) for s in self.steps)

    def child(self, tag: str, index: int = 1, attr: tuple[str, str] | None = None) -> ConcreteSelector:
        return ConcreteSelector(self.steps + (Step(CHILD, Predicate(tag, attr), index),))

    def desc(self, tag: str, index: int = 1, attr: tuple[str, str] | None = None) -> ConcreteSelector:
        return ConcreteSelector(self.steps + (Step(DESC, Predicate(tag, attr), index),))


EPSILON = ConcreteSelector()


@dataclass(frozen=True)
class DomNode:
    tag: str
    attrs: tuple[tuple[str, str], ...] = ()
    text: str | None = None
    children: tuple[DomNode, ...] = ()
    node_id: int = -1

    def attr(self, name: str) -> str | None:
        for key, value in self.attrs:
            if key == name:
                return value
        return None


class DomTree:
    """One page snapshot. Nodes are renumbered in preorder at construction
    and never mutated afterwards; the tree carries resolution caches."""

    __slots__ = ("root", "url", "_nodes", "_abs", "_resolve_cache", "_alt_cache", "_hash")

    def __init__(self, root: DomNode, url: str | None = None):
        numbered: list[DomNode] = []

        def renumber(node: DomNode) -> DomNode:
            nid = len(numbered)
            numbered.append(node)  # placeholder to reserve the id
            children = tuple(renumber(c) for c in node.children)
            fresh = DomNode(node.tag, node.attrs, node.text, children, nid)
            numbered[nid] = fresh
            return fresh

        self.root = renumber(root)
        self.url = url
        self._nodes = numbered
        self._abs: dict[int, ConcreteSelector] | None = None
        self._resolve_cache: dict[ConcreteSelector, DomNode | None] = {}
        self._alt_cache: dict = {}
        self._hash: int | None = None

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other) -> bool:
        return isinstance(other, DomTree) and self.url == other.url and self.root == other.root

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.url, self.root))
        return self._hash

    def node_by_id(self, node_id: int) -> DomNode:
        return self._nodes[node_id]

    def nodes(self) -> Iterator[DomNode]:
        return iter(self._nodes)

    def contains(self, node: DomNode) -> bool:
        return 0 <= node.node_id < len(self._nodes) and self._nodes[node.node_id] is node


def preorder(node: DomNode) -> Iterator[DomNode]:
    yield node
    for child in node.children:
        yield from preorder(child)


def strict_descendants(node: DomNode) -> Iterator[DomNode]:
    for child in node.children:
        yield from preorder(child)


def full_text(node: DomNode) -> str:
    """Own text plus all descendant text in document order."""
    parts = [node.text or ""]
    parts.extend(full_text(c) for c in node.children)
    return "".join(parts)


def _apply_step(anchor: DomNode, step: Step) -> DomNode | None:
    found = 0
    pool = anchor.children if step.axis == CHILD else strict_descendants(anchor)
    for candidate in pool:
        if step.pred.matches(candidate):
            found += 1
            if found == step.index:
                return candidate
    return None


def resolve_selector(selector: ConcreteSelector, tree: DomTree) -> DomNode | None:
    """Walk the steps from the root; absence is a value, not an error."""
    cache = tree._resolve_cache
    if selector in cache:
        return cache[selector]
    node: DomNode | None = tree.root
    for step in selector.steps:
        node = _apply_step(node, step)
        if node is None:
            break
    cache[selector] = node
    return node


def resolution_path(selector: ConcreteSelector, tree: DomTree) -> list[DomNode] | None:
    """Nodes visited by each step, starting with the root; None if unresolved."""
    path = [tree.root]
    for step in selector.steps:
        nxt = _apply_step(path[-1], step)
        if nxt is None:
            return None
        path.append(nxt)
    return path


def is_valid(selector: ConcreteSelector, tree: DomTree) -> bool:
    return resolve_selector(selector, tree) is not None


def absolute_selector_of(node: DomNode, tree: DomTree) -> ConcreteSelector:
    """The unique all-child-axis, plain-tag selector of a node, with per-tag
    sibling indices. Inverse of resolve_selector on its own output."""
    if not tree.contains(node):
        raise ValueError("node does not belong to this tree")
    if tree._abs is None:
        paths: dict[int, ConcreteSelector] = {tree.root.node_id: EPSILON}

        def walk(parent: DomNode) -> None:
            ranks: dict[str, int] = {}
            for child in parent.children:
                ranks[child.tag] = ranks.get(child.tag, 0) + 1
                paths[child.node_id] = paths[parent.node_id].child(child.tag, ranks[child.tag])
                walk(child)

        walk(tree.root)
        tree._abs = paths
    return tree._abs[node.node_id]


def _attr_rank(name: str) -> tuple:
    order = {"class": 0, "id": 1}
    return (order.get(name, 2), name)


def _predicates_for(node: DomNode) -> list[Predicate]:
    preds = [Predicate(node.tag)]
    for name, value in sorted(node.attrs, key=lambda kv: _attr_rank(kv[0])):
        preds.append(Predicate(node.tag, (name, value)))
    return preds


def _desc_rank(anchor: DomNode, target: DomNode, pred: Predicate) -> int:
    rank = 0
    for node in strict_descendants(anchor):
        if pred.matches(node):
            rank += 1
            if node.node_id == target.node_id:
                return rank
    raise AssertionError("target not a matching descendant of anchor")


def alternative_selectors(
    selector: ConcreteSelector, tree: DomTree, cap: int | None = 5
) -> list[ConcreteSelector]:
    """Selectors equivalent to `selector` on this tree, the original first.

    Candidates replace a prefix of the step list with one or two descendant
    steps (anchored at the root or at a kept prefix) whose predicate is the
    target node's tag or tag plus one attribute, indexed by that node's rank
    among matching descendants. At most `cap` non-identity candidates are
    kept, in a fixed enumeration order.
    """
    key = (selector, cap)
    cached = tree._alt_cache.get(key)
    if cached is not None:
        return cached

    path = resolution_path(selector, tree)
    if path is None:
        raise ValueError(f"selector {selector} does not resolve on this tree")
    steps = selector.steps
    depth = len(steps)

    def desc_step(anchor_node: DomNode, target: DomNode, pred: Predicate) -> Step:
        return Step(DESC, pred, _desc_rank(anchor_node, target, pred))

    candidates: list[ConcreteSelector] = []
    # One descendant step: keep steps[:k0], jump to the node after step k2.
    for k0 in range(depth):
        for k2 in range(depth, k0, -1):
            for pred in _predicates_for(path[k2]):
                jump = desc_step(path[k0], path[k2], pred)
                candidates.append(ConcreteSelector(steps[:k0] + (jump,) + steps[k2:]))
    # Two descendant steps, composed (bounded nesting).
    for k0 in range(depth):
        for k2 in range(depth, k0 + 1, -1):
            for k1 in range(k2 - 1, k0, -1):
                for pred1 in _predicates_for(path[k1]):
                    jump1 = desc_step(path[k0], path[k1], pred1)
                    for pred2 in _predicates_for(path[k2]):
                        jump2 = desc_step(path[k1], path[k2], pred2)
                        candidates.append(
                            ConcreteSelector(steps[:k0] + (jump1, jump2) + steps[k2:])
                        )

    out = [selector]
    seen = {selector}
    for cand in candidates:
        if cand in seen:
            continue
        seen.add(cand)
        out.append(cand)
        if cap is not None and len(out) > cap:
            break
    tree._alt_cache[key] = out
    return out


# --- selector string syntax -------------------------------------------------

def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("'", "\\'")


def selector_to_string(selector: ConcreteSelector) -> str:
    return str(selector)


def parse_steps(text: str, start: int = 0) -> tuple[Step, ...]:
    """Parse a run of `/pred[i]` / `//pred[i]` steps covering text[start:]."""
    steps: list[Step] = []
    i = start
    n = len(text)
    while i < n:
        if text[i] != "/":
            raise SelectorParseError("expected '/'", i)
        if i + 1 < n and text[i + 1] == "/":
            axis, i = DESC, i + 2
        else:
            axis, i = CHILD, i + 1
        j = i
        while j < n and (text[j].isalnum() or text[j] in "-_:"):
            j += 1
        if j == i:
            raise SelectorParseError("expected tag name", i)
        tag = text[i:j]
        i = j
        attr = None
        if text.startswith("[@", i):
            i += 2
            j = i
            while j < n and (text[j].isalnum() or text[j] in "-_:"):
                j += 1
            if j == i or j >= n or text[j] != "=":
                raise SelectorParseError("malformed attribute predicate", i)
            name = text[i:j]
            i = j + 1
            if i >= n or text[i] != "'":
                raise SelectorParseError("expected quoted attribute value", i)
            i += 1
            value_chars: list[str] = []
            while i < n and text[i] != "'":
                if text[i] == "\\" and i + 1 < n:
                    i += 1
                value_chars.append(text[i])
                i += 1
            if i >= n:
                raise SelectorParseError("unterminated attribute value", i)
            i += 1  # closing quote
            if i >= n or text[i] != "]":
                raise SelectorParseError("expected ']' after attribute", i)
            i += 1
            attr = (name, "".join(value_chars))
        if i >= n or text[i] != "[":
            raise SelectorParseError("expected '[index]'", i)
        i += 1
        j = i
        while j < n and text[j].isdigit():
            j += 1
        if j == i or j >= n or text[j] != "]":
            raise SelectorParseError("malformed step index", i)
        index = int(text[i:j])
        if index < 1:
            raise SelectorParseError("step index must be >= 1", i)
        steps.append(Step(axis, Predicate(tag, attr), index))
        i = j + 1
    return tuple(steps)


def parse_selector(text: str) -> ConcreteSelector:
    """Inverse of selector_to_string; the empty string is the root selector."""
    return ConcreteSelector(parse_steps(text))


def predicate_to_string(pred: Predicate) -> str:
    return str(pred)


def parse_predicate(text: str) -> Predicate:
    steps = parse_steps("/" + text + "[1]")
    if len(steps) != 1:
        raise SelectorParseError("expected a single predicate", 0)
    return steps[0].pred


# --- snapshot JSON format ----------------------------------------------------

def node_to_json(node: DomNode) -> dict:
    return {
        "tag": node.tag,
        "attrs": dict(node.attrs),
        "text": node.text,
        "children": [node_to_json(c) for c in node.children],
    }


def node_from_json(obj: dict) -> DomNode:
    if not isinstance(obj, dict) or "tag" not in obj:
        raise ValueError("malformed DOM node object")
    return DomNode(
        tag=obj["tag"],
        attrs=tuple((str(k), str(v)) for k, v in obj.get("attrs", {}).items()),
        text=obj.get("text"),
        children=tuple(node_from_json(c) for c in obj.get("children", [])),
    )


def tree_to_json(tree: DomTree) -> dict:
    return {"url": tree.url, "root": node_to_json(tree.root)}


def tree_from_json(obj: dict) -> DomTree:
    if not isinstance(obj, dict) or "root" not in obj:
        raise ValueError("malformed DOM tree object")
    return DomTree(node_from_json(obj["root"]), url=obj.get("url"))


def tree_to_text(tree: DomTree) -> str:
    return json.dumps(tree_to_json(tree), indent=2)


def tree_from_text(text: str) -> DomTree:
    return tree_from_json(json.loads(text))


# --- lenient HTML ingestion (fixture building) --------------------------------

_VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)


class _SnapshotParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack: list[tuple[str, tuple[tuple[str, str], ...], list, list]] = [
            ("#root", (), [], [])
        ]

    def handle_starttag(self, tag, attrs):
        entry = (tag, tuple((k, v or "") for k, v in attrs), [], [])
        if tag in _VOID_TAGS:
            self.stack[-1][2].append(self._finish(entry))
        else:
            self.stack.append(entry)

    def handle_startendtag(self, tag, attrs):
        self.stack[-1][2].append(self._finish((tag, tuple((k, v or "") for k, v in attrs), [], [])))

    def handle_endtag(self, tag):
        for depth in range(len(self.stack) - 1, 0, -1):
            if self.stack[depth][0] == tag:
                while len(self.stack) > depth:
                    closed = self.stack.pop()
                    self.stack[-1][2].append(self._finish(closed))
                return
        # stray end tag: ignore

    def handle_data(self, data):
        if data.strip():
            self.stack[-1][3].append(data)

    @staticmethod
    def _finish(entry) -> DomNode:
        tag, attrs, children, texts = entry
        return DomNode(tag, attrs, "".join(texts) or None, tuple(children))

    def result(self) -> DomNode:
        while len(self.stack) > 1:
            closed = self.stack.pop()
            self.stack[-1][2].append(self._finish(closed))
        _, _, children, _ = self.stack[0]
        if len(children) == 1:
            return children[0]
        return DomNode("html", (), None, tuple(children))


def html_to_tree(html: str, url: str | None = None) -> DomTree:
    """Best-effort conversion of HTML text to a snapshot; whitespace-only
    text is dropped and unclosed elements are closed at end of input. The
    parsed element is wrapped in a document node so absolute selectors start
    at the html element."""
    parser = _SnapshotParser()
    parser.feed(html)
    return DomTree(DomNode("#document", children=(parser.result(),)), url=url)
