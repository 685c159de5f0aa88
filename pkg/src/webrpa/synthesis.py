"""Loop synthesis from recorded action traces by speculative rewriting.

A worklist of trace partitions is grown by (1) speculating loop statements
whose first iteration provably reproduces a slice of the trace, using
anti-unification of two statements plus parametrization of the statements
between them, and (2) validating each speculated loop by re-executing it
under the trace semantics and demanding it reproduce strictly more than its
first iteration. Accepted rewrites shrink the program, so the search
terminates; every program ever enqueued still reproduces the whole trace.
The worklist is explored smallest-program-first and can be carried across
calls while the trace grows, which keeps interactive re-synthesis cheap.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field, replace

from .dom import CHILD, ConcreteSelector, DomTree, alternative_selectors
from .lang import (
    Action,
    AtomicStatement,
    ConcreteValuePath,
    ForEachSelectors,
    ForEachValuePaths,
    IndexStep,
    Program,
    SelectorsExpr,
    Statement,
    SymbolicSelector,
    SymbolicValuePath,
    ValuePathsExpr,
    While,
    action_statement,
    alpha_equivalent,
    canonical_form,
    program_size,
)
from .semantics import (
    DeadlineExceeded,
    ExecutionError,
    Prediction,
    actions_consistent,
    generalizes,
    prediction_group_key,
    run_with_emit,
    satisfies,
)

_PLACEHOLDER = "@"


@dataclass(frozen=True)
class SynthConfig:
    """Engine knobs. `no_selector` restricts the selector space to the
    recorded selectors themselves; `incremental` is honored by callers that
    hold state between runs; `check_invariants` re-verifies every enqueued
    partition (slow, for tests). `max_entries` bounds worklist pops per call
    and `max_state_entries` bounds the state carried across calls, keeping
    results deterministic when the wall-clock budget does not bind."""

    budget_s: float = 1.0
    alt_cap: int | None = 5
    no_selector: bool = False
    incremental: bool = True
    check_invariants: bool = False
    max_results: int = 200
    max_entries: int = 800
    max_state_entries: int = 24


@dataclass(frozen=True)
class WorklistEntry:
    """A program together with the partition of the trace it reproduces:
    statement k covers action slice k, which covers DOM slice k."""

    program: tuple[Statement, ...]
    slices: tuple[tuple[Action, ...], ...]
    dom_slices: tuple[tuple[DomTree, ...], ...]

    def check_invariants(self, actions, doms, data=None) -> None:
        if len(self.program) != len(self.slices) or len(self.slices) != len(self.dom_slices):
            raise AssertionError("partition arity mismatch")
        flat = tuple(a for s in self.slices for a in s)
        if flat != tuple(actions):
            raise AssertionError("slices do not partition the trace")
        flat_doms = tuple(d for s in self.dom_slices for d in s)
        if list(flat_doms) != list(doms[: len(actions)]):
            raise AssertionError("DOM slices do not partition the DOM trace")
        for k, stmt in enumerate(self.program):
            if len(self.slices[k]) != len(self.dom_slices[k]):
                raise AssertionError("slice/DOM slice length mismatch")
            lookahead = (self.dom_slices[k + 1][0] if k + 1 < len(self.program)
                         else doms[len(actions)])
            window = self.dom_slices[k] + (lookahead,)
            if not satisfies(Program((stmt,)), self.slices[k], window, data):
                raise AssertionError(f"statement {k} does not reproduce its slice")


@dataclass(frozen=True)
class SRewrite:
    """A speculated loop whose first iteration reproduces slices lo..hi."""

    loop: Statement
    lo: int
    hi: int


@dataclass
class SynthState:
    """Worklist snapshot for incremental re-synthesis on a grown trace."""

    actions: tuple[Action, ...]
    entries: tuple[WorklistEntry, ...]


@dataclass
class SynthResult:
    programs: list[Program]
    predictions: list[Prediction]
    state: SynthState
    stats: dict = field(default_factory=dict)


class _Reject(Exception):
    pass


class _Ctx:
    def __init__(self, data, config: SynthConfig, deadline: float):
        self.data = data
        self.config = config
        self.deadline = deadline

    def check_deadline(self) -> None:
        if time.monotonic() > self.deadline:
            raise DeadlineExceeded

    def alternatives(self, selector: ConcreteSelector, dom: DomTree) -> list[ConcreteSelector]:
        if self.config.no_selector:
            return [selector]
        try:
            return alternative_selectors(selector, dom, cap=self.config.alt_cap)
        except ValueError:
            return [selector]


def _bound_vars(stmt: Statement) -> set[str]:
    if isinstance(stmt, (ForEachSelectors, ForEachValuePaths)):
        out = {stmt.var}
        for s in stmt.body.statements:
            out |= _bound_vars(s)
        return out
    if isinstance(stmt, While):
        out = set()
        for s in stmt.body.statements:
            out |= _bound_vars(s)
        return out
    return set()


# --- placeholder renaming -----------------------------------------------------

def _subst_sel(sel: SymbolicSelector | None, name: str) -> SymbolicSelector | None:
    if sel is not None and sel.head == _PLACEHOLDER:
        return SymbolicSelector(name, sel.steps)
    return sel


def _subst_vp(vp: SymbolicValuePath | None, name: str) -> SymbolicValuePath | None:
    if vp is not None and vp.head == _PLACEHOLDER:
        return SymbolicValuePath(name, vp.steps)
    return vp


def _subst_stmt(stmt: Statement, name: str) -> Statement:
    if isinstance(stmt, AtomicStatement):
        return replace(stmt, selector=_subst_sel(stmt.selector, name),
                       value_path=_subst_vp(stmt.value_path, name))
    if isinstance(stmt, ForEachSelectors):
        source = SelectorsExpr(stmt.source.kind, _subst_sel(stmt.source.anchor, name),
                               stmt.source.pred)
        body = Program(tuple(_subst_stmt(s, name) for s in stmt.body.statements))
        return ForEachSelectors(stmt.var, source, body)
    if isinstance(stmt, ForEachValuePaths):
        source = ValuePathsExpr(_subst_vp(stmt.source.path, name))
        body = Program(tuple(_subst_stmt(s, name) for s in stmt.body.statements))
        return ForEachValuePaths(stmt.var, source, body)
    if isinstance(stmt, While):
        body = Program(tuple(_subst_stmt(s, name) for s in stmt.body.statements))
        return While(body, _subst_stmt(stmt.click, name))
    raise TypeError(f"not a statement: {stmt!r}")


# --- anti-unification ---------------------------------------------------------

def _anti_unify_selectors(sel1: ConcreteSelector, sel2: ConcreteSelector,
                          dom1: DomTree, dom2: DomTree, ctx: _Ctx):
    """Templates over the placeholder variable that instantiate to an
    alternative of sel1 at list position 1 and of sel2 at position 2, with
    the selector list they range over."""
    out = []
    seen = set()
    for alt1 in ctx.alternatives(sel1, dom1):
        for alt2 in ctx.alternatives(sel2, dom2):
            if len(alt1.steps) != len(alt2.steps):
                continue
            diff = [k for k, (a, b) in enumerate(zip(alt1.steps, alt2.steps)) if a != b]
            if len(diff) != 1:
                continue
            k = diff[0]
            s1, s2 = alt1.steps[k], alt2.steps[k]
            if s1.axis != s2.axis or s1.pred != s2.pred or (s1.index, s2.index) != (1, 2):
                continue
            anchor = SymbolicSelector(None, alt1.steps[:k])
            kind = "Children" if s1.axis == CHILD else "Dscts"
            source = SelectorsExpr(kind, anchor, s1.pred)
            template = SymbolicSelector(_PLACEHOLDER, alt1.steps[k + 1:])
            key = (template, source)
            if key not in seen:
                seen.add(key)
                out.append((template, source))
    return out


def _anti_unify_value_paths(vp1: ConcreteValuePath, vp2: ConcreteValuePath):
    """Match paths of the shape base[1]suffix vs base[2]suffix."""
    if len(vp1.steps) != len(vp2.steps):
        return []
    diff = [k for k, (a, b) in enumerate(zip(vp1.steps, vp2.steps)) if a != b]
    if len(diff) != 1:
        return []
    k = diff[0]
    if vp1.steps[k] != IndexStep(1) or vp2.steps[k] != IndexStep(2):
        return []
    base = SymbolicValuePath(None, vp1.steps[:k])
    template = SymbolicValuePath(_PLACEHOLDER, vp1.steps[k + 1:])
    return [(template, ValuePathsExpr(base))]


_AU_MEMO: dict = {}
_PAR_MEMO: dict = {}
_MEMO_LIMIT = 400_000


def _memo_guard() -> None:
    if len(_AU_MEMO) > _MEMO_LIMIT:
        _AU_MEMO.clear()
    if len(_PAR_MEMO) > _MEMO_LIMIT:
        _PAR_MEMO.clear()


def anti_unify(stmt1: Statement, stmt2: Statement, dom1: DomTree, dom2: DomTree,
               ctx: _Ctx) -> list:
    """Least-general templates of two statements: a statement over the
    placeholder loop variable plus the collection the variable ranges over.
    Statements of different kinds, or without a generalizable argument,
    yield nothing. Results are memoized structurally, so they survive
    incremental runs."""
    cfg = ctx.config
    key = (stmt1, stmt2, dom1, dom2, cfg.no_selector, cfg.alt_cap)
    hit = _AU_MEMO.get(key)
    if hit is not None:
        return hit
    out: list = []

    if isinstance(stmt1, AtomicStatement) and isinstance(stmt2, AtomicStatement):
        if stmt1.kind == stmt2.kind and stmt1.kind == "EnterData":
            if (stmt1.selector == stmt2.selector and stmt1.value_path.is_concrete()
                    and stmt2.value_path.is_concrete()):
                for template, source in _anti_unify_value_paths(
                        stmt1.value_path.concrete(), stmt2.value_path.concrete()):
                    out.append((replace(stmt1, value_path=template), source))
        elif (stmt1.kind == stmt2.kind and stmt1.selector is not None
              and stmt1.text == stmt2.text
              and stmt1.selector.is_concrete() and stmt2.selector.is_concrete()):
            for template, source in _anti_unify_selectors(
                    stmt1.selector.concrete(), stmt2.selector.concrete(), dom1, dom2, ctx):
                out.append((replace(stmt1, selector=template), source))

    elif isinstance(stmt1, ForEachSelectors) and isinstance(stmt2, ForEachSelectors):
        if (stmt1.source.kind == stmt2.source.kind
                and stmt1.source.pred == stmt2.source.pred
                and stmt1.source.anchor.is_concrete() and stmt2.source.anchor.is_concrete()
                and alpha_equivalent(stmt1.body, stmt2.body, {stmt1.var: stmt2.var})):
            for template, source in _anti_unify_selectors(
                    stmt1.source.anchor.concrete(), stmt2.source.anchor.concrete(),
                    dom1, dom2, ctx):
                inner = SelectorsExpr(stmt1.source.kind, template, stmt1.source.pred)
                out.append((ForEachSelectors(stmt1.var, inner, stmt1.body), source))

    _AU_MEMO[key] = out
    return out


# --- parametrization ------------------------------------------------------------

def _with_selector_prefix(selector: SymbolicSelector | None, binding: ConcreteSelector,
                          dom: DomTree, ctx: _Ctx) -> list[SymbolicSelector]:
    """Rewritings of a concrete selector argument to placeholder/suffix,
    using any alternative whose steps start with the binding."""
    if selector is None or not selector.is_concrete():
        return []
    n = len(binding.steps)
    out = []
    for alt in ctx.alternatives(selector.concrete(), dom):
        if alt.steps[:n] == binding.steps:
            out.append(SymbolicSelector(_PLACEHOLDER, alt.steps[n:]))
    return out


def parametrize(stmt: Statement, binding: ConcreteSelector | ConcreteValuePath,
                dom: DomTree, ctx: _Ctx) -> list[Statement]:
    """All ways to express a statement in terms of the placeholder loop
    variable given its first-iteration binding; always includes the statement
    unchanged. Loop statements are rewritten only through their collection
    expressions, never their bodies."""
    cfg = ctx.config
    key = (stmt, binding, dom, cfg.no_selector, cfg.alt_cap)
    hit = _PAR_MEMO.get(key)
    if hit is not None:
        return hit
    out: list[Statement] = [stmt]
    if isinstance(binding, ConcreteSelector):
        if isinstance(stmt, AtomicStatement):
            for sel in _with_selector_prefix(stmt.selector, binding, dom, ctx):
                out.append(replace(stmt, selector=sel))
        elif isinstance(stmt, ForEachSelectors):
            for sel in _with_selector_prefix(stmt.source.anchor, binding, dom, ctx):
                source = SelectorsExpr(stmt.source.kind, sel, stmt.source.pred)
                out.append(ForEachSelectors(stmt.var, source, stmt.body))
    else:
        n = len(binding.steps)
        if isinstance(stmt, AtomicStatement) and stmt.value_path is not None \
                and stmt.value_path.is_concrete():
            if stmt.value_path.steps[:n] == binding.steps:
                vp = SymbolicValuePath(_PLACEHOLDER, stmt.value_path.steps[n:])
                out.append(replace(stmt, value_path=vp))
        elif isinstance(stmt, ForEachValuePaths) and stmt.source.path.is_concrete():
            if stmt.source.path.steps[:n] == binding.steps:
                vp = SymbolicValuePath(_PLACEHOLDER, stmt.source.path.steps[n:])
                out.append(ForEachValuePaths(stmt.var, ValuePathsExpr(vp), stmt.body))
    deduped = []
    seen = set()
    for s in out:
        if s not in seen:
            seen.add(s)
            deduped.append(s)
    _PAR_MEMO[key] = deduped
    return deduped


def first_selector(source: SelectorsExpr) -> ConcreteSelector:
    return source.nth(source.anchor.concrete(), 1)


def first_value_path(source: ValuePathsExpr) -> ConcreteValuePath:
    return source.path.concrete().index(1)


# --- speculation ------------------------------------------------------------------

def _fresh_for(prefix: str, taken: set[str]) -> str:
    for n in itertools.count():
        name = f"{prefix}{n}"
        if name not in taken:
            return name


def speculate(entry: WorklistEntry, ctx: _Ctx) -> list[SRewrite]:
    """Loop statements whose first iteration reproduces a slice of the entry.

    Foreach loops pair a statement of the first iteration with its
    counterpart in the second (same offset), anti-unify the pair, and
    parametrize the statements between them. While loops wrap any
    click-terminated span; their second iteration is only checked
    semantically, during validation.
    """
    stmts = entry.program
    l = len(stmts)
    first_dom = [entry.dom_slices[k][0] for k in range(l)]
    taken: set[str] = set()
    for s in stmts:
        taken |= _bound_vars(s)
    sel_var = _fresh_for("r", taken)
    vp_var = _fresh_for("d", taken)

    out: list[SRewrite] = []
    seen: set = set()

    def add(loop: Statement, lo: int, hi: int) -> None:
        key = (loop, lo, hi)
        if key not in seen:
            seen.add(key)
            out.append(SRewrite(loop, lo, hi))

    for p in range(l):
        ctx.check_deadline()
        for q in range(p + 1, l):
            options = anti_unify(stmts[p], stmts[q], first_dom[p], first_dom[q], ctx)
            if not options:
                continue
            length = q - p
            for template, source in options:
                if isinstance(source, SelectorsExpr):
                    binding: ConcreteSelector | ConcreteValuePath = first_selector(source)
                    var = sel_var
                else:
                    binding = first_value_path(source)
                    var = vp_var
                for i in range(max(0, p - length + 1), p + 1):
                    j = i + length - 1
                    per_slot = []
                    for k in range(i, j + 1):
                        if k == p:
                            per_slot.append([template])
                        else:
                            per_slot.append(parametrize(stmts[k], binding, first_dom[k], ctx))
                    for combo in itertools.product(*per_slot):
                        body = Program(tuple(_subst_stmt(s, var) for s in combo))
                        if isinstance(source, SelectorsExpr):
                            loop: Statement = ForEachSelectors(
                                var, SelectorsExpr(source.kind,
                                                   _subst_sel(source.anchor, var),
                                                   source.pred), body)
                        else:
                            loop = ForEachValuePaths(
                                var, ValuePathsExpr(_subst_vp(source.path, var)), body)
                        add(loop, i, j)

    for p in range(l):
        stmt = stmts[p]
        if (isinstance(stmt, AtomicStatement) and stmt.kind == "Click"
                and stmt.selector is not None and stmt.selector.is_concrete()):
            for i in range(p):
                add(While(Program(stmts[i:p]), stmt), i, p)

    _memo_guard()
    return out


# --- validation ------------------------------------------------------------------

def validate(rewrites, entry: WorklistEntry, ctx: _Ctx) -> list[WorklistEntry]:
    """Keep the speculated loops that, re-executed from the start of their
    span, reproduce the trace through at least one whole slice beyond their
    first iteration, ending exactly on a slice boundary. Each survivor yields
    the rewritten, strictly shorter entry."""
    stmts = entry.program
    l = len(stmts)
    offsets = [0]
    for s in entry.slices:
        offsets.append(offsets[-1] + len(s))
    actions_flat = tuple(a for s in entry.slices for a in s)
    doms_flat = tuple(d for s in entry.dom_slices for d in s)
    boundary_to_stmt = {offsets[k + 1]: k for k in range(l)}

    accepted: list[WorklistEntry] = []
    seen_keys: set = set()
    for rw in rewrites:
        ctx.check_deadline()
        start = offsets[rw.lo]
        ref_actions = actions_flat[start:]
        ref_doms = doms_flat[start:]
        produced = 0

        def check(action: Action, dom: DomTree) -> None:
            nonlocal produced
            if not actions_consistent(action, ref_actions[produced], dom):
                raise _Reject
            produced += 1

        try:
            run_with_emit(Program((rw.loop,)), ref_doms, ctx.data,
                          emit=check, deadline=ctx.deadline)
        except (_Reject, ExecutionError):
            continue
        r = boundary_to_stmt.get(start + produced)
        if r is None or r < rw.hi + 1:
            continue
        new_entry = WorklistEntry(
            program=stmts[: rw.lo] + (rw.loop,) + stmts[r + 1:],
            slices=entry.slices[: rw.lo] + (ref_actions[:produced],) + entry.slices[r + 1:],
            dom_slices=(entry.dom_slices[: rw.lo] + (ref_doms[:produced],)
                        + entry.dom_slices[r + 1:]),
        )
        key = canonical_form(Program(new_entry.program))
        if key not in seen_keys:
            seen_keys.add(key)
            accepted.append(new_entry)
    return accepted


# --- top-level search ---------------------------------------------------------------

def rank(programs) -> list[Program]:
    """Smallest first; ties broken by canonical form. Deterministic."""
    return sorted(programs, key=lambda p: (program_size(p), canonical_form(p)))


def _seed_entry(actions, doms) -> WorklistEntry:
    return WorklistEntry(
        program=tuple(action_statement(a) for a in actions),
        slices=tuple((a,) for a in actions),
        dom_slices=tuple((doms[t],) for t in range(len(actions))),
    )


def _extend_state(state: SynthState, actions, doms) -> list[WorklistEntry]:
    n_old = len(state.actions)
    if tuple(actions[:n_old]) != state.actions:
        raise ValueError("synthesis state does not match a prefix of the trace")
    fresh = actions[n_old:]
    if not fresh:
        return list(state.entries)
    extra_stmts = tuple(action_statement(a) for a in fresh)
    extra_slices = tuple((a,) for a in fresh)
    extra_doms = tuple((doms[n_old + t],) for t in range(len(fresh)))
    return [
        WorklistEntry(e.program + extra_stmts, e.slices + extra_slices,
                      e.dom_slices + extra_doms)
        for e in state.entries
    ]


def synthesize(actions, doms, data=None, config: SynthConfig = SynthConfig(),
               state: SynthState | None = None) -> SynthResult:
    """Search for programs that reproduce the trace and predict its next
    action. Returns the generalizing programs (smallest first), their
    deduplicated predictions on the lookahead snapshot, and the worklist
    state for incremental resumption."""
    actions = tuple(actions)
    doms = tuple(doms)
    if len(doms) != len(actions) + 1:
        raise ValueError("need exactly one more DOM than actions")
    if not actions:
        raise ValueError("need at least one action")

    if state is not None:
        seeds = _extend_state(state, actions, doms)
    else:
        seeds = [_seed_entry(actions, doms)]

    deadline = time.monotonic() + config.budget_s
    ctx = _Ctx(data, config, deadline)

    heap: list[tuple[int, int, WorklistEntry]] = []
    seq = itertools.count()
    visited: set[str] = set()
    removed: list[WorklistEntry] = []
    results: dict[str, tuple[Program, Prediction]] = {}
    result_entries: list[WorklistEntry] = []
    stats = {"processed": 0, "enqueued": 0, "accepted_rewrites": 0, "timed_out": False,
             "truncated": False}

    def enqueue(entry: WorklistEntry) -> str | None:
        key = canonical_form(Program(entry.program))
        if key in visited:
            return None
        visited.add(key)
        if config.check_invariants:
            entry.check_invariants(actions, doms, data)
        heapq.heappush(heap, (len(entry.program), next(seq), entry))
        stats["enqueued"] += 1
        return key

    for e in seeds:
        enqueue(e)

    try:
        while heap:
            if stats["processed"] >= config.max_entries:
                stats["truncated"] = True
                break
            ctx.check_deadline()
            _, _, entry = heapq.heappop(heap)
            removed.append(entry)
            stats["processed"] += 1
            program = Program(entry.program)
            key = canonical_form(program)
            if key not in results and len(results) < config.max_results:
                prediction = generalizes(program, actions, doms, data,
                                         deadline=deadline, program_key=key)
                if prediction is not None:
                    results[key] = (program, prediction)
                    result_entries.append(entry)
            rewrites = speculate(entry, ctx)
            for new_entry in validate(rewrites, entry, ctx):
                stats["accepted_rewrites"] += 1
                enqueue(new_entry)
    except DeadlineExceeded:
        stats["timed_out"] = True

    ranked = rank([p for p, _ in results.values()])
    predictions: list[Prediction] = []
    seen_groups = set()
    for program in ranked:
        _, prediction = results[canonical_form(program)]
        group = prediction_group_key(prediction, doms[-1])
        if group not in seen_groups:
            seen_groups.add(group)
            predictions.append(prediction)

    # Carry forward the straight-line seed (everything re-derives from it),
    # then the entries whose programs generalized, then the most-collapsed of
    # the rest, up to the configured bound.
    leftover = [e for _, _, e in heap]
    pool = removed + leftover
    keep: list[WorklistEntry] = []
    kept_ids: set[int] = set()

    def retain(entry: WorklistEntry) -> None:
        if id(entry) not in kept_ids and len(keep) < config.max_state_entries:
            kept_ids.add(id(entry))
            keep.append(entry)

    for e in pool:
        if len(e.program) == len(actions):
            retain(e)
            break
    for e in sorted(result_entries, key=lambda e: len(e.program)):
        retain(e)
    for e in sorted(pool, key=lambda e: len(e.program)):
        retain(e)
    new_state = SynthState(actions=actions, entries=tuple(keep))
    return SynthResult(ranked, predictions, new_state, stats)
