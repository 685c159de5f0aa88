"""Synthesis of loopy web-automation programs from recorded action traces."""

from .dom import (
    CHILD,
    DESC,
    EPSILON,
    ConcreteSelector,
    DomNode,
    DomTree,
    Predicate,
    Step,
    absolute_selector_of,
    alternative_selectors,
    full_text,
    html_to_tree,
    is_valid,
    parse_selector,
    resolve_selector,
    tree_from_json,
    tree_to_json,
)
from .lang import (
    Action,
    AtomicStatement,
    ConcreteValuePath,
    ForEachSelectors,
    ForEachValuePaths,
    IndexStep,
    KeyStep,
    ParseError,
    Program,
    SelectorsExpr,
    SymbolicSelector,
    SymbolicValuePath,
    ValuePathsExpr,
    While,
    action_from_json,
    action_to_json,
    alpha_equivalent,
    canonical_form,
    pretty_program,
    program_from_text,
    program_size,
    program_to_text,
    trace_from_text,
    trace_to_text,
    verbatim_program,
    well_scoped,
)
from .semantics import (
    DeadlineExceeded,
    Env,
    ExecResult,
    ExecutionError,
    Prediction,
    actions_consistent,
    execute,
    generalizes,
    satisfies,
    trace_consistent,
)
from .synthesis import SynthConfig, SynthResult, SynthState, rank, synthesize

__all__ = [name for name in dir() if not name.startswith("_")]
