"""Simulated execution over DOM traces: exactness of the loop rules,
consistency checks, satisfaction/generalization, and the structural
invariants (one snapshot per action, determinism, prefix monotonicity,
lazy unrolling)."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webrpa.dom import EPSILON, Predicate, parse_selector
from webrpa.lang import (
    Action,
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
    action_to_json,
    click,
    scrape_text,
    verbatim_program,
)
from webrpa.semantics import (
    ExecutionError,
    actions_consistent,
    execute,
    generalizes,
    get_array,
    get_value,
    satisfies,
    trace_consistent,
)

from .helpers import SAMPLE_DATA, el, link_page, page, programs


def click_all_links_program() -> Program:
    return Program((ForEachSelectors(
        "r", SelectorsExpr("Dscts", SymbolicSelector(None), Predicate("a")),
        Program((AtomicStatement("Click", selector=SymbolicSelector("r")),))),))


def scrape_pairs_loop() -> Program:
    """foreach r in Dscts(root, a) { ScrapeText(r); ScrapeText(r/b[1]) }"""
    return Program((ForEachSelectors(
        "r", SelectorsExpr("Dscts", SymbolicSelector(None), Predicate("a")),
        Program((
            AtomicStatement("ScrapeText", selector=SymbolicSelector("r")),
            AtomicStatement("ScrapeText",
                            selector=SymbolicSelector("r", parse_selector("/b[1]").steps)),
        ))),))


def pagination_program() -> Program:
    return Program((While(
        Program(scrape_pairs_loop().statements),
        AtomicStatement("Click", selector=SymbolicSelector(None,
                                                           parse_selector("//c[1]").steps)),
    ),))


def test_two_dom_loop_produces_exactly_two_clicks():
    doms = [link_page(2), link_page(2)]
    result = execute(click_all_links_program(), doms)
    assert [action_to_json(a) for a in result.actions] == [
        {"kind": "Click", "selector": "//a[1]"},
        {"kind": "Click", "selector": "//a[2]"},
    ]
    assert result.remaining == ()
    assert result.env.selectors["r"] == parse_selector("//a[2]")


def test_empty_dom_trace_stops_everything():
    result = execute(pagination_program(), [])
    assert result.actions == () and result.remaining == ()


def make_pagination_trace(page_sizes=(20, 9)):
    """Hand-unrolled oracle for the canonical pagination run: scrape every
    item and its child on each page, click next between pages."""
    expected: list[Action] = []
    doms = []
    n_pages = len(page_sizes)
    for page_no, n in enumerate(page_sizes):
        has_next = page_no + 1 < n_pages
        snapshot = link_page(n, with_next=has_next)
        for i in range(1, n + 1):
            expected.append(scrape_text(EPSILON.desc("a", i)))
            doms.append(snapshot)
            expected.append(scrape_text(EPSILON.desc("a", i).child("b", 1)))
            doms.append(snapshot)
        if has_next:
            expected.append(click(parse_selector("//c[1]")))
            doms.append(snapshot)
    doms.append(link_page(page_sizes[-1], with_next=False))
    return expected, doms


def test_pagination_program_matches_hand_unrolled_oracle():
    expected, doms = make_pagination_trace((20, 9))
    assert len(expected) == 59 and len(doms) == 60
    result = execute(pagination_program(), doms)
    # the run ends on the last page: item loop and while both see no target
    assert list(result.actions) == expected
    assert len(result.remaining) == 1


def test_mid_body_exhaustion_terminates_gracefully():
    expected, doms = make_pagination_trace((3, 2))
    result = execute(pagination_program(), doms[:4])
    assert list(result.actions) == expected[:4]
    assert result.remaining == ()


def test_value_path_loop_is_eager_and_extends_env():
    data = {"rows": [{"name": "a"}, {"name": "b"}]}
    field = SymbolicSelector(None, parse_selector("/html[1]/body[1]/div[1]").steps)
    program = Program((ForEachValuePaths(
        "v", ValuePathsExpr(SymbolicValuePath(None, (KeyStep("rows"),))),
        Program((AtomicStatement("EnterData", selector=field,
                                 value_path=SymbolicValuePath("v", (KeyStep("name"),))),))),))
    snapshot = page(el("div", text="field"))
    result = execute(program, [snapshot] * 2, data)
    paths = [str(a.value_path) for a in result.actions]
    assert paths == ["x['rows'][1]['name']", "x['rows'][2]['name']"]


def test_value_path_loop_over_non_array_is_an_error():
    program = Program((ForEachValuePaths(
        "v", ValuePathsExpr(SymbolicValuePath(None, (KeyStep("limit"),))),
        Program((AtomicStatement("GoBack"),))),))
    with pytest.raises(ExecutionError):
        execute(program, [page()], SAMPLE_DATA)


def test_unbound_variable_is_an_error():
    program = Program.__new__(Program)  # bypass scoping at construction
    object.__setattr__(program, "statements",
                       (AtomicStatement("Click", selector=SymbolicSelector("ghost")),))
    with pytest.raises(ExecutionError):
        execute(program, [page()])


def test_get_value_and_get_array():
    path = ConcreteValuePath((KeyStep("rows"), IndexStep(2), KeyStep("name")))
    assert get_value(SAMPLE_DATA, path) == "bob"
    assert len(get_array(SAMPLE_DATA, ConcreteValuePath((KeyStep("zips"),)))) == 2
    with pytest.raises(ExecutionError):
        get_value(SAMPLE_DATA, ConcreteValuePath((KeyStep("nope"),)))
    with pytest.raises(ExecutionError):
        get_array(SAMPLE_DATA, ConcreteValuePath((KeyStep("limit"),)))


# --- consistency -------------------------------------------------------------


def test_actions_consistent_compares_resolved_nodes():
    snapshot = page(el("a", text="x"), el("a", text="y"))
    absolute = click(parse_selector("/html[1]/body[1]/a[2]"))
    relative = click(parse_selector("//a[2]"))
    assert actions_consistent(absolute, relative, snapshot)
    assert not actions_consistent(absolute, click(parse_selector("//a[1]")), snapshot)


def test_actions_consistent_kind_and_arg_mismatches():
    snapshot = page(el("a", text="x"))
    sel = parse_selector("//a[1]")
    assert not actions_consistent(scrape_text(sel), click(sel), snapshot)
    sk1 = Action("SendKeys", selector=sel, text="one")
    sk2 = Action("SendKeys", selector=sel, text="two")
    assert not actions_consistent(sk1, sk2, snapshot)
    assert actions_consistent(Action("GoBack"), Action("GoBack"), snapshot)


def test_both_invalid_selectors_are_not_consistent():
    snapshot = page(el("a", text="x"))
    ghost = click(parse_selector("//div[5]"))
    assert not actions_consistent(ghost, ghost, snapshot)


def test_trace_consistent_pointwise_and_length_checked():
    snapshot = page(el("a", text="x"), el("a", text="y"))
    trace = [click(parse_selector("//a[1]")), click(parse_selector("//a[2]"))]
    variant = [click(parse_selector("/html[1]/body[1]/a[1]")),
               click(parse_selector("/html[1]/body[1]/a[2]"))]
    assert trace_consistent([], [], [])
    assert trace_consistent(trace, trace, [snapshot, snapshot])
    assert trace_consistent(trace, variant, [snapshot, snapshot])
    with pytest.raises(ValueError):
        trace_consistent(trace, trace[:1], [snapshot, snapshot])


# --- satisfaction and generalization ------------------------------------------


def test_verbatim_program_satisfies_its_trace():
    expected, doms = make_pagination_trace((4, 2))
    assert satisfies(verbatim_program(expected), expected, doms)


def test_pagination_program_satisfies_recorded_trace():
    expected, doms = make_pagination_trace((20, 9))
    assert satisfies(pagination_program(), expected, doms)


def test_wrong_child_tag_loop_does_not_satisfy():
    expected, doms = make_pagination_trace((4, 2))
    wrong = Program((ForEachSelectors(
        "r", SelectorsExpr("Dscts", SymbolicSelector(None), Predicate("a")),
        Program((
            AtomicStatement("ScrapeText", selector=SymbolicSelector("r")),
            AtomicStatement("ScrapeText",
                            selector=SymbolicSelector("r", parse_selector("/i[1]").steps)),
        ))),))
    assert not satisfies(wrong, expected, doms)


def test_verbatim_program_never_generalizes():
    expected, doms = make_pagination_trace((3, 2))
    assert generalizes(verbatim_program(expected), expected, doms) is None


def test_loop_on_click_prefix_predicts_second_click():
    doms = [link_page(2), link_page(2)]
    prefix = [click(parse_selector("//a[1]"))]
    prediction = generalizes(click_all_links_program(), prefix, doms)
    assert prediction is not None
    assert action_to_json(prediction.action) == {"kind": "Click", "selector": "//a[2]"}
    assert prediction.target_node_id is not None


def test_generalizes_requires_exactly_one_lookahead():
    with pytest.raises(ValueError):
        generalizes(click_all_links_program(), [], [link_page(1), link_page(1)])


# --- structural properties ------------------------------------------------------


@settings(max_examples=120, deadline=None)
@given(program=programs(data_valid=True), n_doms=st.integers(0, 6))
def test_one_dom_per_action(program, n_doms):
    doms = [link_page(i % 3, with_next=True) for i in range(n_doms)]
    result = execute(program, doms, SAMPLE_DATA)
    assert len(result.actions) + len(result.remaining) == len(doms)


@settings(max_examples=60, deadline=None)
@given(program=programs(data_valid=True), n_doms=st.integers(0, 6))
def test_execution_is_deterministic(program, n_doms):
    doms = [link_page(2, with_next=True) for _ in range(n_doms)]
    first = execute(program, doms, SAMPLE_DATA)
    second = execute(program, doms, SAMPLE_DATA)
    assert first.actions == second.actions
    assert len(first.remaining) == len(second.remaining)


@settings(max_examples=80, deadline=None)
@given(program=programs(data_valid=True), n_doms=st.integers(0, 6),
       cut=st.integers(0, 6))
def test_prefix_monotonicity(program, n_doms, cut):
    doms = [link_page((i * 2) % 3, with_next=True) for i in range(n_doms)]
    full = execute(program, doms, SAMPLE_DATA).actions
    part = execute(program, doms[: min(cut, n_doms)], SAMPLE_DATA).actions
    assert full[: len(part)] == part


class _Spy(list):
    """DOM-trace list recording the highest index the interpreter looked at."""

    def __init__(self, items):
        super().__init__(items)
        self.max_seen = -1

    def __getitem__(self, idx):
        if isinstance(idx, int):
            self.max_seen = max(self.max_seen, idx)
        return super().__getitem__(idx)


def test_selector_loops_unroll_lazily():
    from webrpa.semantics import run_with_emit

    doms = _Spy([link_page(3) for _ in range(3)])
    seen_at_emit = []

    def emit(action, dom):
        seen_at_emit.append(doms.max_seen)

    program = Program((ForEachSelectors(
        "r", SelectorsExpr("Children",
                           SymbolicSelector(None, parse_selector("/html[1]/body[1]").steps),
                           Predicate("a")),
        Program((AtomicStatement("ScrapeText", selector=SymbolicSelector("r")),))),))
    run_with_emit(program, doms, emit=emit)
    # when the k-th action is emitted, only snapshots up to its own have been read
    assert seen_at_emit == [0, 1, 2]


def test_execution_honors_deadline():
    import time

    from webrpa.semantics import DeadlineExceeded

    expected, doms = make_pagination_trace((20, 20, 20, 20, 9))
    with pytest.raises(DeadlineExceeded):
        execute(pagination_program(), doms, deadline=time.monotonic() - 1.0)


@settings(max_examples=60, deadline=None)
@given(tree=__import__("tests.helpers", fromlist=["dom_trees"]).dom_trees(),
       data=st.data())
def test_verbatim_satisfaction_on_random_well_formed_traces(tree, data):
    from webrpa.dom import absolute_selector_of, preorder

    nodes = list(preorder(tree.root))
    n = data.draw(st.integers(0, min(5, len(nodes))))
    actions = []
    for _ in range(n):
        node = data.draw(st.sampled_from(nodes))
        actions.append(scrape_text(absolute_selector_of(node, tree)))
    doms = [tree] * (n + 1)
    assert satisfies(verbatim_program(actions), actions, doms) if actions else True
