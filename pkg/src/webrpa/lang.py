"""ASTs for automation programs, recorded actions, and input-data paths,
plus their serialization, sizing, and alpha-equivalence utilities.

Programs are sequences of statements: eight atomic browser actions with
possibly variable-headed selector/value-path arguments, two foreach loop
forms (over page selectors or over input-data paths), and a click-terminated
while loop used for pagination. Recorded actions are the loop-free,
variable-free counterpart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Union

from .dom import (
    ConcreteSelector,
    Predicate,
    SelectorParseError,
    Step,
    parse_predicate,
    parse_steps,
)

ACTION_KINDS = (
    "Click",
    "ScrapeText",
    "ScrapeLink",
    "Download",
    "GoBack",
    "ExtractURL",
    "SendKeys",
    "EnterData",
)
SELECTOR_KINDS = frozenset(k for k in ACTION_KINDS if k not in ("GoBack", "ExtractURL"))


class ParseError(ValueError):
    """Malformed serialized value; `where` names the offending location."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{message}{f' at {where}' if where else ''}")
        self.where = where


# --- value paths ---------------------------------------------------------------

@dataclass(frozen=True)
class KeyStep:
    key: str


@dataclass(frozen=True)
class IndexStep:
    index: int  # 1-based

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("value-path index must be >= 1")


ValuePathStep = Union[KeyStep, IndexStep]


@dataclass(frozen=True)
class ConcreteValuePath:
    """Access path into the input data, rooted at the input variable."""

    steps: tuple[ValuePathStep, ...] = ()

    def __str__(self) -> str:
        return "x" + _vp_steps_str(self.steps)

    def key(self, key: str) -> ConcreteValuePath:
        return ConcreteValuePath(self.steps + (KeyStep(key),))

    def index(self, i: int) -> ConcreteValuePath:
        return ConcreteValuePath(self.steps + (IndexStep(i),))


@dataclass(frozen=True)
class SymbolicValuePath:
    """Value path whose head is either the input variable or a loop variable."""

    head: str | None  # None = the input variable
    steps: tuple[ValuePathStep, ...] = ()

    def __str__(self) -> str:
        head = "x" if self.head is None else f"${self.head}"
        return head + _vp_steps_str(self.steps)

    def is_concrete(self) -> bool:
        return self.head is None

    def concrete(self) -> ConcreteValuePath:
        if self.head is not None:
            raise ValueError(f"value path {self} has a variable head")
        return ConcreteValuePath(self.steps)


def _vp_steps_str(steps: tuple[ValuePathStep, ...]) -> str:
    parts = []
    for s in steps:
        if isinstance(s, KeyStep):
            quoted = s.key.replace("\\", "\\\\").replace("'", "\\'")
            parts.append(f"['{quoted}']")
        else:
            parts.append(f"[{s.index}]")
    return "".join(parts)


def symbolic_value_path(path: ConcreteValuePath) -> SymbolicValuePath:
    return SymbolicValuePath(None, path.steps)


def parse_value_path(text: str, symbolic: bool = False):
    i = 0
    n = len(text)
    head: str | None
    if text.startswith("x"):
        head, i = None, 1
    elif symbolic and text.startswith("$"):
        j = 1
        while j < n and (text[j].isalnum() or text[j] == "_"):
            j += 1
        if j == 1:
            raise ParseError("empty variable name", f"value path {text!r}")
        head, i = text[1:j], j
    else:
        raise ParseError("value path must start with 'x'" + (" or '$var'" if symbolic else ""),
                         f"value path {text!r}")
    steps: list[ValuePathStep] = []
    while i < n:
        if text[i] != "[":
            raise ParseError("expected '['", f"value path {text!r} position {i}")
        i += 1
        if i < n and text[i] == "'":
            i += 1
            chars: list[str] = []
            while i < n and text[i] != "'":
                if text[i] == "\\" and i + 1 < n:
                    i += 1
                chars.append(text[i])
                i += 1
            if i >= n:
                raise ParseError("unterminated key", f"value path {text!r} position {i}")
            i += 1
            if i >= n or text[i] != "]":
                raise ParseError("expected ']'", f"value path {text!r} position {i}")
            i += 1
            steps.append(KeyStep("".join(chars)))
        else:
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j == i or j >= n or text[j] != "]":
                raise ParseError("malformed index segment", f"value path {text!r} position {i}")
            index = int(text[i:j])
            if index < 1:
                raise ParseError("value-path index must be >= 1",
                                 f"value path {text!r} position {i}")
            steps.append(IndexStep(index))
            i = j + 1
    if symbolic:
        return SymbolicValuePath(head, tuple(steps))
    return ConcreteValuePath(tuple(steps))


# --- symbolic selectors ----------------------------------------------------------

@dataclass(frozen=True)
class SymbolicSelector:
    """Selector whose head is either the root or a loop variable."""

    head: str | None  # None = root
    steps: tuple[Step, ...] = ()

    def __str__(self) -> str:
        head = "" if self.head is None else f"${self.head}"
        return head + "".join(str(s) for s in self.steps)

    def is_concrete(self) -> bool:
        return self.head is None

    def concrete(self) -> ConcreteSelector:
        if self.head is not None:
            raise ValueError(f"selector {self} has a variable head")
        return ConcreteSelector(self.steps)


def symbolic_selector(selector: ConcreteSelector) -> SymbolicSelector:
    return SymbolicSelector(None, selector.steps)


def parse_symbolic_selector(text: str) -> SymbolicSelector:
    head: str | None = None
    i = 0
    if text.startswith("$"):
        j = 1
        while j < len(text) and (text[j].isalnum() or text[j] == "_"):
            j += 1
        if j == 1:
            raise ParseError("empty variable name", f"selector {text!r}")
        head, i = text[1:j], j
    try:
        steps = parse_steps(text, i)
    except SelectorParseError as exc:
        raise ParseError(str(exc), f"selector {text!r}") from exc
    return SymbolicSelector(head, steps)


# --- actions ---------------------------------------------------------------------

@dataclass(frozen=True)
class Action:
    """One recorded, loop-free browser action with concrete arguments."""

    kind: str
    selector: ConcreteSelector | None = None
    text: str | None = None
    value_path: ConcreteValuePath | None = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")
        if (self.selector is not None) != (self.kind in SELECTOR_KINDS):
            raise ValueError(f"{self.kind} selector argument mismatch")
        if (self.text is not None) != (self.kind == "SendKeys"):
            raise ValueError(f"{self.kind} text argument mismatch")
        if (self.value_path is not None) != (self.kind == "EnterData"):
            raise ValueError(f"{self.kind} value-path argument mismatch")


def click(selector: ConcreteSelector) -> Action:
    return Action("Click", selector=selector)


def scrape_text(selector: ConcreteSelector) -> Action:
    return Action("ScrapeText", selector=selector)


def scrape_link(selector: ConcreteSelector) -> Action:
    return Action("ScrapeLink", selector=selector)


def enter_data(selector: ConcreteSelector, path: ConcreteValuePath) -> Action:
    return Action("EnterData", selector=selector, value_path=path)


def send_keys(selector: ConcreteSelector, text: str) -> Action:
    return Action("SendKeys", selector=selector, text=text)


# --- statements and programs --------------------------------------------------------

@dataclass(frozen=True)
class AtomicStatement:
    kind: str
    selector: SymbolicSelector | None = None
    text: str | None = None
    value_path: SymbolicValuePath | None = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown statement kind {self.kind!r}")
        if (self.selector is not None) != (self.kind in SELECTOR_KINDS):
            raise ValueError(f"{self.kind} selector argument mismatch")
        if (self.text is not None) != (self.kind == "SendKeys"):
            raise ValueError(f"{self.kind} text argument mismatch")
        if (self.value_path is not None) != (self.kind == "EnterData"):
            raise ValueError(f"{self.kind} value-path argument mismatch")


@dataclass(frozen=True)
class SelectorsExpr:
    """A list of page selectors: the children or descendants of an anchor
    that satisfy a predicate, in document order."""

    kind: str  # "Children" | "Dscts"
    anchor: SymbolicSelector
    pred: Predicate

    def __post_init__(self):
        if self.kind not in ("Children", "Dscts"):
            raise ValueError(f"unknown selectors expression {self.kind!r}")

    def nth(self, anchor: ConcreteSelector, i: int) -> ConcreteSelector:
        """The i-th selector of the list under a resolved anchor."""
        if self.kind == "Children":
            return anchor.child(self.pred.tag, i, self.pred.attr)
        return anchor.desc(self.pred.tag, i, self.pred.attr)


@dataclass(frozen=True)
class ValuePathsExpr:
    path: SymbolicValuePath


@dataclass(frozen=True)
class ForEachSelectors:
    var: str
    source: SelectorsExpr
    body: Program


@dataclass(frozen=True)
class ForEachValuePaths:
    var: str
    source: ValuePathsExpr
    body: Program


@dataclass(frozen=True)
class While:
    """Loop running body-then-click until the click's target disappears."""

    body: Program
    click: AtomicStatement

    def __post_init__(self):
        if self.click.kind != "Click":
            raise ValueError("while loops must end with a Click")


Statement = Union[AtomicStatement, ForEachSelectors, ForEachValuePaths, While]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]

    def __post_init__(self):
        if not self.statements:
            raise ValueError("program must have at least one statement")


def action_statement(action: Action) -> AtomicStatement:
    sel = None if action.selector is None else symbolic_selector(action.selector)
    vp = None if action.value_path is None else symbolic_value_path(action.value_path)
    return AtomicStatement(action.kind, selector=sel, text=action.text, value_path=vp)


def verbatim_program(actions) -> Program:
    return Program(tuple(action_statement(a) for a in actions))


def well_scoped(program: Program, bound: frozenset[str] = frozenset()) -> bool:
    """Every variable occurrence is bound by an enclosing loop and loop
    variables are not rebound within their scope."""

    def sel_ok(sel: SymbolicSelector | None, env: frozenset[str]) -> bool:
        return sel is None or sel.head is None or sel.head in env

    def vp_ok(vp: SymbolicValuePath | None, env: frozenset[str]) -> bool:
        return vp is None or vp.head is None or vp.head in env

    def stmt_ok(stmt: Statement, env: frozenset[str]) -> bool:
        if isinstance(stmt, AtomicStatement):
            return sel_ok(stmt.selector, env) and vp_ok(stmt.value_path, env)
        if isinstance(stmt, ForEachSelectors):
            if stmt.var in env or not sel_ok(stmt.source.anchor, env):
                return False
            return prog_ok(stmt.body, env | {stmt.var})
        if isinstance(stmt, ForEachValuePaths):
            if stmt.var in env or not vp_ok(stmt.source.path, env):
                return False
            return prog_ok(stmt.body, env | {stmt.var})
        if isinstance(stmt, While):
            return prog_ok(stmt.body, env) and stmt_ok(stmt.click, env)
        return False

    def prog_ok(prog: Program, env: frozenset[str]) -> bool:
        return all(stmt_ok(s, env) for s in prog.statements)

    return prog_ok(program, bound)


# --- size, alpha-equivalence, canonical form -------------------------------------------

def _sel_size(sel: SymbolicSelector | None) -> int:
    if sel is None:
        return 0
    return len(sel.steps) + (1 if sel.head is not None else 0)


def _vp_size(vp: SymbolicValuePath | None) -> int:
    if vp is None:
        return 0
    return len(vp.steps) + (1 if vp.head is not None else 0)


def statement_size(stmt: Statement) -> int:
    if isinstance(stmt, AtomicStatement):
        return 1 + _sel_size(stmt.selector) + _vp_size(stmt.value_path)
    if isinstance(stmt, ForEachSelectors):
        return 1 + 1 + _sel_size(stmt.source.anchor) + program_size(stmt.body)
    if isinstance(stmt, ForEachValuePaths):
        return 1 + 1 + _vp_size(stmt.source.path) + program_size(stmt.body)
    if isinstance(stmt, While):
        return 1 + program_size(stmt.body) + statement_size(stmt.click)
    raise TypeError(f"not a statement: {stmt!r}")


def program_size(program: Program) -> int:
    """AST node count: statements, selector/value-path steps, loop headers."""
    return sum(statement_size(s) for s in program.statements)


def alpha_equivalent(p1: Program, p2: Program, bound: dict | None = None) -> bool:
    """Structural equality up to consistent renaming of bound loop variables.
    `bound` optionally maps already-bound variables of p1 to those of p2;
    other free variables must match by name."""

    def sel_eq(a: SymbolicSelector | None, b: SymbolicSelector | None, env: dict) -> bool:
        if (a is None) != (b is None):
            return False
        if a is None:
            return True
        if a.steps != b.steps:
            return False
        if (a.head is None) != (b.head is None):
            return False
        return a.head is None or env.get(a.head, a.head) == b.head

    def vp_eq(a: SymbolicValuePath | None, b: SymbolicValuePath | None, env: dict) -> bool:
        if (a is None) != (b is None):
            return False
        if a is None:
            return True
        if a.steps != b.steps:
            return False
        if (a.head is None) != (b.head is None):
            return False
        return a.head is None or env.get(a.head, a.head) == b.head

    def stmt_eq(s1: Statement, s2: Statement, env: dict) -> bool:
        if type(s1) is not type(s2):
            return False
        if isinstance(s1, AtomicStatement):
            return (
                s1.kind == s2.kind
                and s1.text == s2.text
                and sel_eq(s1.selector, s2.selector, env)
                and vp_eq(s1.value_path, s2.value_path, env)
            )
        if isinstance(s1, ForEachSelectors):
            if s1.source.kind != s2.source.kind or s1.source.pred != s2.source.pred:
                return False
            if not sel_eq(s1.source.anchor, s2.source.anchor, env):
                return False
            return prog_eq(s1.body, s2.body, {**env, s1.var: s2.var})
        if isinstance(s1, ForEachValuePaths):
            if not vp_eq(s1.source.path, s2.source.path, env):
                return False
            return prog_eq(s1.body, s2.body, {**env, s1.var: s2.var})
        if isinstance(s1, While):
            return prog_eq(s1.body, s2.body, env) and stmt_eq(s1.click, s2.click, env)
        return False

    def prog_eq(a: Program, b: Program, env: dict) -> bool:
        if len(a.statements) != len(b.statements):
            return False
        return all(stmt_eq(x, y, env) for x, y in zip(a.statements, b.statements))

    return prog_eq(p1, p2, dict(bound) if bound else {})


def _normalize(program: Program) -> Program:
    """Rename bound variables to s0,s1,.. / v0,v1,.. in binding order."""
    counters = {"s": 0, "v": 0}

    def fresh(prefix: str) -> str:
        name = f"{prefix}{counters[prefix]}"
        counters[prefix] += 1
        return name

    def rn_sel(sel: SymbolicSelector | None, env: dict) -> SymbolicSelector | None:
        if sel is None or sel.head is None:
            return sel
        return SymbolicSelector(env.get(sel.head, sel.head), sel.steps)

    def rn_vp(vp: SymbolicValuePath | None, env: dict) -> SymbolicValuePath | None:
        if vp is None or vp.head is None:
            return vp
        return SymbolicValuePath(env.get(vp.head, vp.head), vp.steps)

    def rn_stmt(stmt: Statement, env: dict) -> Statement:
        if isinstance(stmt, AtomicStatement):
            return replace(stmt, selector=rn_sel(stmt.selector, env),
                           value_path=rn_vp(stmt.value_path, env))
        if isinstance(stmt, ForEachSelectors):
            name = fresh("s")
            source = SelectorsExpr(stmt.source.kind, rn_sel(stmt.source.anchor, env), stmt.source.pred)
            return ForEachSelectors(name, source, rn_prog(stmt.body, {**env, stmt.var: name}))
        if isinstance(stmt, ForEachValuePaths):
            name = fresh("v")
            source = ValuePathsExpr(rn_vp(stmt.source.path, env))
            return ForEachValuePaths(name, source, rn_prog(stmt.body, {**env, stmt.var: name}))
        if isinstance(stmt, While):
            return While(rn_prog(stmt.body, env), rn_stmt(stmt.click, env))
        raise TypeError(f"not a statement: {stmt!r}")

    def rn_prog(prog: Program, env: dict) -> Program:
        return Program(tuple(rn_stmt(s, env) for s in prog.statements))

    return rn_prog(program, {})


def canonical_form(program: Program) -> str:
    """Alpha-invariant deterministic key: serialization of the renamed program."""
    return json.dumps(program_to_json(_normalize(program)), sort_keys=True,
                      separators=(",", ":"))


# --- JSON serialization --------------------------------------------------------------

def action_to_json(action: Action) -> dict:
    obj: dict = {"kind": action.kind}
    if action.selector is not None:
        obj["selector"] = str(action.selector)
    if action.text is not None:
        obj["text"] = action.text
    if action.value_path is not None:
        obj["value_path"] = str(action.value_path)
    return obj


def action_from_json(obj: dict) -> Action:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("malformed action object", repr(obj))
    kind = obj["kind"]
    if kind not in ACTION_KINDS:
        raise ParseError(f"unknown action kind {kind!r}", "action")
    selector = None
    if "selector" in obj and obj["selector"] is not None:
        try:
            selector = ConcreteSelector(parse_steps(obj["selector"]))
        except SelectorParseError as exc:
            raise ParseError(str(exc), f"action selector {obj['selector']!r}") from exc
    value_path = None
    if "value_path" in obj and obj["value_path"] is not None:
        value_path = parse_value_path(obj["value_path"])
    try:
        return Action(kind, selector=selector, text=obj.get("text"), value_path=value_path)
    except ValueError as exc:
        raise ParseError(str(exc), "action") from exc


def statement_to_json(stmt: Statement) -> dict:
    if isinstance(stmt, AtomicStatement):
        obj: dict = {"kind": stmt.kind}
        if stmt.selector is not None:
            obj["selector"] = str(stmt.selector)
        if stmt.text is not None:
            obj["text"] = stmt.text
        if stmt.value_path is not None:
            obj["value_path"] = str(stmt.value_path)
        return obj
    if isinstance(stmt, ForEachSelectors):
        return {
            "kind": "ForEachSelectors",
            "var": stmt.var,
            "source": {
                "kind": stmt.source.kind,
                "anchor": str(stmt.source.anchor),
                "pred": str(stmt.source.pred),
            },
            "body": [statement_to_json(s) for s in stmt.body.statements],
        }
    if isinstance(stmt, ForEachValuePaths):
        return {
            "kind": "ForEachValuePaths",
            "var": stmt.var,
            "source": {"kind": "ValuePaths", "path": str(stmt.source.path)},
            "body": [statement_to_json(s) for s in stmt.body.statements],
        }
    if isinstance(stmt, While):
        return {
            "kind": "While",
            "body": [statement_to_json(s) for s in stmt.body.statements],
            "click": statement_to_json(stmt.click),
        }
    raise TypeError(f"not a statement: {stmt!r}")


def statement_from_json(obj: dict) -> Statement:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("malformed statement object", repr(obj))
    kind = obj["kind"]
    if kind == "ForEachSelectors":
        src = obj.get("source", {})
        if src.get("kind") not in ("Children", "Dscts"):
            raise ParseError("malformed selectors expression", "ForEachSelectors source")
        source = SelectorsExpr(
            src["kind"], parse_symbolic_selector(src.get("anchor", "")),
            parse_predicate(src["pred"]),
        )
        return ForEachSelectors(obj["var"], source, _program_from_list(obj.get("body", [])))
    if kind == "ForEachValuePaths":
        src = obj.get("source", {})
        source = ValuePathsExpr(parse_value_path(src["path"], symbolic=True))
        return ForEachValuePaths(obj["var"], source, _program_from_list(obj.get("body", [])))
    if kind == "While":
        click = statement_from_json(obj["click"])
        if not isinstance(click, AtomicStatement):
            raise ParseError("while click must be atomic", "While")
        return While(_program_from_list(obj.get("body", [])), click)
    if kind in ACTION_KINDS:
        selector = None
        if obj.get("selector") is not None:
            selector = parse_symbolic_selector(obj["selector"])
        value_path = None
        if obj.get("value_path") is not None:
            value_path = parse_value_path(obj["value_path"], symbolic=True)
        try:
            return AtomicStatement(kind, selector=selector, text=obj.get("text"),
                                   value_path=value_path)
        except ValueError as exc:
            raise ParseError(str(exc), "statement") from exc
    raise ParseError(f"unknown statement kind {kind!r}", "statement")


def _program_from_list(items: list) -> Program:
    if not isinstance(items, list) or not items:
        raise ParseError("program body must be a non-empty list", "program")
    return Program(tuple(statement_from_json(s) for s in items))


def program_to_json(program: Program) -> dict:
    return {"statements": [statement_to_json(s) for s in program.statements]}


def program_from_json(obj: dict) -> Program:
    if not isinstance(obj, dict) or "statements" not in obj:
        raise ParseError("malformed program object", "program")
    program = _program_from_list(obj["statements"])
    if not well_scoped(program):
        raise ParseError("program is not well-scoped", "program")
    return program


def program_to_text(program: Program) -> str:
    return json.dumps(program_to_json(program), indent=2)


def program_from_text(text: str) -> Program:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"offset {exc.pos}") from exc
    return program_from_json(obj)


# --- trace files -----------------------------------------------------------------------

def trace_to_json(actions, doms, input_data=None) -> dict:
    from .dom import tree_to_json

    return {
        "input_data": input_data,
        "actions": [action_to_json(a) for a in actions],
        "doms": [tree_to_json(t) for t in doms],
    }


def trace_from_json(obj: dict):
    from .dom import tree_from_json

    if not isinstance(obj, dict) or "actions" not in obj or "doms" not in obj:
        raise ParseError("malformed trace object", "trace")
    actions = tuple(action_from_json(a) for a in obj["actions"])
    doms = tuple(tree_from_json(t) for t in obj["doms"])
    if len(doms) != len(actions) + 1:
        raise ParseError(
            f"trace needs one more DOM than actions, got {len(actions)} actions "
            f"and {len(doms)} DOMs", "trace")
    return actions, doms, obj.get("input_data")


def trace_to_text(actions, doms, input_data=None) -> str:
    return json.dumps(trace_to_json(actions, doms, input_data), indent=2)


def trace_from_text(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"offset {exc.pos}") from exc
    return trace_from_json(obj)


# --- human-readable surface form (non-canonical) -----------------------------------------

def _sel_str(sel: SymbolicSelector | None) -> str:
    if sel is None:
        return ""
    if sel.head is None and not sel.steps:
        return "ε"
    return str(sel)


def pretty_statement(stmt: Statement, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(stmt, AtomicStatement):
        args = []
        if stmt.selector is not None:
            args.append(_sel_str(stmt.selector))
        if stmt.text is not None:
            args.append(repr(stmt.text))
        if stmt.value_path is not None:
            args.append(str(stmt.value_path))
        return f"{pad}{stmt.kind}({', '.join(args)})" if args else f"{pad}{stmt.kind}"
    if isinstance(stmt, ForEachSelectors):
        head = (f"{pad}foreach ${stmt.var} in {stmt.source.kind}"
                f"({_sel_str(stmt.source.anchor)}, {stmt.source.pred}) {{")
        body = "\n".join(pretty_statement(s, indent + 1) for s in stmt.body.statements)
        return f"{head}\n{body}\n{pad}}}"
    if isinstance(stmt, ForEachValuePaths):
        head = f"{pad}foreach ${stmt.var} in ValuePaths({stmt.source.path}) {{"
        body = "\n".join(pretty_statement(s, indent + 1) for s in stmt.body.statements)
        return f"{head}\n{body}\n{pad}}}"
    if isinstance(stmt, While):
        body = "\n".join(pretty_statement(s, indent + 1) for s in stmt.body.statements)
        last = pretty_statement(stmt.click, indent + 1)
        return f"{pad}while {{\n{body}\n{last}\n{pad}}}"
    raise TypeError(f"not a statement: {stmt!r}")


def pretty_program(program: Program) -> str:
    return "\n".join(pretty_statement(s) for s in program.statements)
