"""Simulated execution of programs over recorded DOM traces.

Execution never touches a browser: each atomic action consumes exactly one
snapshot from the supplied DOM trace and appends one concrete action to the
output. Loop control is guided by the snapshots themselves (selector loops
continue while their next selector resolves on the current head; while loops
stop when the trailing click's target disappears). Running out of snapshots
stops the whole execution gracefully.

Also hosts action/trace consistency and the satisfaction, generalization,
and prediction checks built on it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .dom import ConcreteSelector, DomTree, is_valid, resolve_selector
from .lang import (
    Action,
    AtomicStatement,
    ConcreteValuePath,
    ForEachSelectors,
    ForEachValuePaths,
    KeyStep,
    Program,
    Statement,
    SymbolicSelector,
    SymbolicValuePath,
    ValuePathsExpr,
    While,
    canonical_form,
    verbatim_program,
)


class ExecutionError(Exception):
    """Unbound variable or a value path that does not exist in the data."""


class DeadlineExceeded(Exception):
    """Cooperative timeout raised between statements."""


class Env:
    """Variable bindings; extension is functional (binding returns a new Env)."""

    __slots__ = ("data", "selectors", "value_paths")

    def __init__(self, data=None, selectors=None, value_paths=None):
        self.data = data
        self.selectors: dict[str, ConcreteSelector] = selectors or {}
        self.value_paths: dict[str, ConcreteValuePath] = value_paths or {}

    def bind_selector(self, var: str, value: ConcreteSelector) -> Env:
        return Env(self.data, {**self.selectors, var: value}, self.value_paths)

    def bind_value_path(self, var: str, value: ConcreteValuePath) -> Env:
        return Env(self.data, self.selectors, {**self.value_paths, var: value})

    def selector(self, var: str) -> ConcreteSelector:
        try:
            return self.selectors[var]
        except KeyError:
            raise ExecutionError(f"unbound selector variable {var!r}") from None

    def value_path(self, var: str) -> ConcreteValuePath:
        try:
            return self.value_paths[var]
        except KeyError:
            raise ExecutionError(f"unbound value-path variable {var!r}") from None


@dataclass(frozen=True)
class ExecResult:
    actions: tuple[Action, ...]
    remaining: tuple[DomTree, ...]
    env: Env


@dataclass(frozen=True)
class Prediction:
    """The next action a generalizing program would perform, resolved on the
    lookahead snapshot."""

    action: Action
    target_node_id: int | None
    program_key: str


def get_value(data, path: ConcreteValuePath):
    """Navigate the input data along a value path; 1-based list indices."""
    value = data
    for step in path.steps:
        if isinstance(step, KeyStep):
            if not isinstance(value, dict) or step.key not in value:
                raise ExecutionError(f"no key {step.key!r} at {path}")
            value = value[step.key]
        else:
            if not isinstance(value, list) or not (1 <= step.index <= len(value)):
                raise ExecutionError(f"index {step.index} out of range at {path}")
            value = value[step.index - 1]
    return value


def get_array(data, path: ConcreteValuePath) -> list:
    value = get_value(data, path)
    if not isinstance(value, list):
        raise ExecutionError(f"value path {path} does not denote an array")
    return value


def eval_selector(sel: SymbolicSelector, env: Env) -> ConcreteSelector:
    if sel.head is None:
        return ConcreteSelector(sel.steps)
    base = env.selector(sel.head)
    return ConcreteSelector(base.steps + sel.steps)


def eval_value_path(vp: SymbolicValuePath, env: Env) -> ConcreteValuePath:
    if vp.head is None:
        return ConcreteValuePath(vp.steps)
    base = env.value_path(vp.head)
    return ConcreteValuePath(base.steps + vp.steps)


def eval_value_paths(expr: ValuePathsExpr, env: Env) -> list[ConcreteValuePath]:
    base = eval_value_path(expr.path, env)
    arr = get_array(env.data, base)
    return [base.index(i) for i in range(1, len(arr) + 1)]


class _Interpreter:
    """Recursive big-step walk. Emits actions through a callback so callers
    can stop early; one snapshot is consumed per emitted action."""

    def __init__(self, doms: Sequence[DomTree], emit: Callable[[Action, DomTree], None],
                 deadline: float | None, stats: dict | None):
        self.doms = doms
        self.pos = 0
        self.emit = emit
        self.deadline = deadline
        self.stats = stats

    def _tick(self, rule: str) -> None:
        if self.stats is not None:
            self.stats[rule] = self.stats.get(rule, 0) + 1

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded

    def exhausted(self) -> bool:
        return self.pos >= len(self.doms)

    def head(self) -> DomTree:
        return self.doms[self.pos]

    def run(self, statements: Sequence[Statement], env: Env) -> Env:
        for stmt in statements:
            self._check_deadline()
            if self.exhausted():
                self._tick("term")
                return env
            env = self.step(stmt, env)
        return env

    def step(self, stmt: Statement, env: Env) -> Env:
        if isinstance(stmt, AtomicStatement):
            return self._atomic(stmt, env)
        if isinstance(stmt, ForEachSelectors):
            return self._selector_loop(stmt, env)
        if isinstance(stmt, ForEachValuePaths):
            return self._value_path_loop(stmt, env)
        if isinstance(stmt, While):
            return self._while_loop(stmt, env)
        raise TypeError(f"not a statement: {stmt!r}")

    def _perform(self, action: Action) -> None:
        dom = self.head()
        self.pos += 1
        self.emit(action, dom)

    def _atomic(self, stmt: AtomicStatement, env: Env) -> Env:
        selector = None
        if stmt.selector is not None:
            selector = eval_selector(stmt.selector, env)
        value_path = None
        if stmt.value_path is not None:
            value_path = eval_value_path(stmt.value_path, env)
        self._tick("action")
        self._perform(Action(stmt.kind, selector=selector, text=stmt.text,
                             value_path=value_path))
        return env

    def _selector_loop(self, stmt: ForEachSelectors, env: Env) -> Env:
        anchor = eval_selector(stmt.source.anchor, env)
        self._tick("loop_init")
        i = 1
        while True:
            self._check_deadline()
            if self.exhausted():
                self._tick("term")
                return env
            selector = stmt.source.nth(anchor, i)
            if not is_valid(selector, self.head()):
                self._tick("loop_term")
                return env
            self._tick("loop_cont")
            env = self.run(stmt.body.statements, env.bind_selector(stmt.var, selector))
            i += 1

    def _value_path_loop(self, stmt: ForEachValuePaths, env: Env) -> Env:
        paths = eval_value_paths(stmt.source, env)
        self._tick("vp_loop")
        for path in paths:
            self._check_deadline()
            if self.exhausted():
                self._tick("term")
                return env
            env = self.run(stmt.body.statements, env.bind_value_path(stmt.var, path))
        return env

    def _while_loop(self, stmt: While, env: Env) -> Env:
        while True:
            env = self.run(stmt.body.statements, env)
            self._check_deadline()
            if self.exhausted():
                self._tick("term")
                return env
            selector = eval_selector(stmt.click.selector, env)
            if not is_valid(selector, self.head()):
                self._tick("while_term")
                return env
            self._tick("while_cont")
            self._perform(Action("Click", selector=selector))


def run_with_emit(program: Program, doms: Sequence[DomTree], data=None,
                  emit: Callable[[Action, DomTree], None] = lambda a, d: None,
                  deadline: float | None = None, stats: dict | None = None) -> tuple[int, Env]:
    """Drive the interpreter, reporting each action with the snapshot it
    consumed; returns (consumed snapshot count, final environment)."""
    interp = _Interpreter(doms, emit, deadline, stats)
    env = interp.run(program.statements, Env(data=data))
    return interp.pos, env


def execute(program: Program, doms: Sequence[DomTree], data=None,
            deadline: float | None = None, stats: dict | None = None) -> ExecResult:
    """Big-step execution of a whole program over a DOM trace."""
    actions: list[Action] = []
    consumed, env = run_with_emit(program, doms, data,
                                  emit=lambda a, d: actions.append(a),
                                  deadline=deadline, stats=stats)
    return ExecResult(tuple(actions), tuple(doms[consumed:]), env)


def actions_consistent(a1: Action, a2: Action, dom: DomTree) -> bool:
    """Same kind, equal non-selector arguments, and selectors referring to
    the same node of the given snapshot. Two unresolvable selectors never
    refer to a node, so they are not consistent."""
    if a1.kind != a2.kind or a1.text != a2.text or a1.value_path != a2.value_path:
        return False
    if a1.selector is None:
        return True
    n1 = resolve_selector(a1.selector, dom)
    n2 = n1 if a2.selector == a1.selector else resolve_selector(a2.selector, dom)
    return n1 is not None and n2 is not None and n1.node_id == n2.node_id


def trace_consistent(a_trace1: Sequence[Action], a_trace2: Sequence[Action],
                     doms: Sequence[DomTree]) -> bool:
    if len(a_trace1) != len(a_trace2):
        raise ValueError("traces must have equal length")
    if len(a_trace1) > len(doms):
        raise ValueError("not enough DOMs for pointwise consistency")
    return all(actions_consistent(x, y, d)
               for x, y, d in zip(a_trace1, a_trace2, doms))


def satisfies(program: Program, actions: Sequence[Action], doms: Sequence[DomTree],
              data=None, deadline: float | None = None) -> bool:
    """The program reproduces the recorded actions: its simulated run covers
    them as a consistent prefix."""
    if len(doms) < len(actions):
        raise ValueError("DOM trace shorter than action trace")
    produced: list[Action] = []
    bad = False

    def check(action: Action, dom: DomTree) -> None:
        nonlocal bad
        idx = len(produced)
        produced.append(action)
        if idx < len(actions) and not actions_consistent(action, actions[idx], dom):
            bad = True
        if bad or len(produced) >= len(actions):
            raise _StopRun

    try:
        run_with_emit(program, doms, data, emit=check, deadline=deadline)
    except _StopRun:
        pass
    except ExecutionError:
        return False
    return not bad and len(produced) >= len(actions)


class _StopRun(Exception):
    pass


def generalizes(program: Program, actions: Sequence[Action], doms: Sequence[DomTree],
                data=None, deadline: float | None = None,
                program_key: str | None = None) -> Prediction | None:
    """If the program reproduces the trace and then performs at least one
    further action, return that action resolved on the lookahead snapshot."""
    if len(doms) != len(actions) + 1:
        raise ValueError("need exactly one lookahead DOM")
    produced: list[Action] = []
    bad = False

    def check(action: Action, dom: DomTree) -> None:
        nonlocal bad
        idx = len(produced)
        produced.append(action)
        if idx < len(actions) and not actions_consistent(action, actions[idx], dom):
            bad = True
        if bad or idx >= len(actions):
            raise _StopRun

    try:
        run_with_emit(program, doms, data, emit=check, deadline=deadline)
    except _StopRun:
        pass
    except ExecutionError:
        return None
    if bad or len(produced) <= len(actions):
        return None
    extra = produced[len(actions)]
    target = None
    if extra.selector is not None:
        node = resolve_selector(extra.selector, doms[-1])
        target = node.node_id if node is not None else None
    key = program_key if program_key is not None else canonical_form(program)
    return Prediction(extra, target, key)


def prediction_group_key(prediction: Prediction, lookahead: DomTree):
    """Predictions with equal keys make consistent actions on the lookahead."""
    action = prediction.action
    if action.selector is None:
        node_part = None
    elif prediction.target_node_id is not None:
        node_part = ("node", prediction.target_node_id)
    else:
        node_part = ("unresolved", str(action.selector))
    return (action.kind, action.text,
            None if action.value_path is None else str(action.value_path), node_part)


def verbatim_satisfies(actions: Sequence[Action], doms: Sequence[DomTree], data=None) -> bool:
    """Sanity check: the straight-line replay of a trace reproduces it."""
    return satisfies(verbatim_program(actions), actions, doms, data)
