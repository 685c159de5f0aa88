"""Synthetic sites, ground-truth recording, fixture generation, and the
prefix-prediction benchmarks."""

from __future__ import annotations

import json

import pytest

from webrpa.dom import parse_selector, resolve_selector
from webrpa.harness import (
    RecordingError,
    Session,
    SiteSpec,
    example_pagination_site,
    generate_fixture_suite,
    read_fixture_files,
    record_ground_truth,
    run_fixture_benchmark,
    run_prefix_benchmark,
    write_fixture_files,
)
from webrpa.lang import (
    AtomicStatement,
    Program,
    SymbolicSelector,
    verbatim_program,
)
from webrpa.semantics import execute, satisfies
from webrpa.synthesis import SynthConfig


def test_single_loop_recording_counts(fixture_suite):
    fx = fixture_suite["single-loop"]
    assert len(fx.actions) == 10  # two scrapes per item, five items
    assert len(fx.doms) == 11
    for action in fx.actions:
        assert action.selector is not None
        assert not any(s.axis == "desc" for s in action.selector.steps)  # absolute


def test_recording_cap_truncates():
    spec, program = example_pagination_site((20, 20, 9))
    actions, doms = record_ground_truth(program, spec, cap=3)
    assert len(actions) == 3 and len(doms) == 4


def test_example_pagination_trace_matches_listing_shape():
    spec, program = example_pagination_site((20, 20, 9))
    actions, doms = record_ground_truth(program, spec, cap=59, absolute=False)
    assert len(actions) == 59 and len(doms) == 60
    assert [str(a.selector) for a in actions[:2]] == ["//a[1]", "//a[1]/b[1]"]
    assert [str(a.selector) for a in actions[38:41]] == ["//a[20]", "//a[20]/b[1]",
                                                         "/html[1]/body[1]/c[1]"]
    assert actions[40].kind == "Click"
    assert [str(a.selector) for a in actions[41:43]] == ["//a[1]", "//a[1]/b[1]"]
    assert str(actions[58].selector) == "//a[9]/b[1]"


def test_full_pagination_run_length():
    spec, program = example_pagination_site((20, 20, 9))
    actions, doms = record_ground_truth(program, spec)
    # 40 + click + 40 + click + 18, then both loop and while see no target
    assert len(actions) == 100


def test_recording_error_on_missing_selector():
    spec, _ = example_pagination_site((3,))
    bad = Program((AtomicStatement(
        "Click", selector=SymbolicSelector(None, parse_selector("//nav[1]").steps)),))
    with pytest.raises(RecordingError):
        record_ground_truth(bad, spec)


def test_fixture_suite_is_deterministic(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    write_fixture_files(generate_fixture_suite(7), str(first))
    write_fixture_files(generate_fixture_suite(7), str(second))
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_fixture_files_round_trip(tmp_path, fixture_suite):
    write_fixture_files(list(fixture_suite.values()), str(tmp_path))
    loaded = {f.name: f for f in read_fixture_files(str(tmp_path))}
    assert set(loaded) == set(fixture_suite)
    for name, fx in fixture_suite.items():
        assert loaded[name].actions == fx.actions
        assert loaded[name].generalizes_after == fx.generalizes_after
        assert list(loaded[name].doms) == list(fx.doms)


def test_every_fixture_trace_is_well_formed(fixture_suite):
    for fx in fixture_suite.values():
        assert len(fx.doms) == len(fx.actions) + 1
        for action, dom in zip(fx.actions, fx.doms):
            if action.selector is not None:
                assert resolve_selector(action.selector, dom) is not None


def test_every_fixture_program_reproduces_its_recording(fixture_suite):
    for fx in fixture_suite.values():
        assert satisfies(fx.program, fx.actions, fx.doms, fx.input_data), fx.name
        assert satisfies(verbatim_program(fx.actions), fx.actions, fx.doms,
                         fx.input_data), fx.name


def test_three_level_recording_exercises_every_loop_rule(fixture_suite):
    fx = fixture_suite["three-level"]
    stats: dict = {}
    execute(fx.program, fx.doms, fx.input_data, stats=stats)
    for rule in ("loop_init", "loop_cont", "loop_term", "vp_loop",
                 "while_cont", "while_term"):
        assert stats.get(rule, 0) >= 1, f"rule {rule} never fired"


def test_session_navigation_and_scrapes():
    spec = SiteSpec(name="nav", pages=(2, 1), item_tag="a", next_tag="c",
                    detail_links=True)
    session = Session(spec)
    from webrpa.lang import Action

    first_link = resolve_selector(parse_selector("//a[@class='d'][1]"), session.current)
    assert first_link is not None
    session.apply(Action("Click", selector=parse_selector("//a[@class='d'][1]")))
    assert resolve_selector(parse_selector("//p[@class='detail'][1]"), session.current)
    session.apply(Action("GoBack"))
    assert resolve_selector(parse_selector("//a[@class='d'][1]"), session.current)
    session.apply(Action("ScrapeText", selector=parse_selector("//a[1]")))
    assert session.scraped
    session.apply(Action("Click", selector=parse_selector("//c[1]")))
    assert session.view.page == 1
    assert resolve_selector(parse_selector("//c[1]"), session.current) is None


def test_prefix_benchmark_on_smallest_fixture(fixture_suite):
    fx = fixture_suite["class-anchored"]
    report = run_fixture_benchmark(fx)
    assert report.n_tests == len(fx.actions) - 1
    assert report.post_accuracy == 1.0
    assert report.intended_found and report.intended_first_prefix == fx.generalizes_after
    assert not report.per_test[0]["correct"]  # single-action prefix cannot predict


def test_prefix_benchmark_logical_fields_are_deterministic(fixture_suite):
    fx = fixture_suite["children-sibling"]
    a = run_fixture_benchmark(fx)
    b = run_fixture_benchmark(fx)
    keep = lambda r: (r.n_tests, r.n_correct, r.accuracy, r.post_accuracy,
                      r.intended_found, r.intended_first_prefix,
                      [(t["k"], t["correct"], t["answered"]) for t in r.per_test])
    assert keep(a) == keep(b)


def test_benchmark_requires_two_actions(fixture_suite):
    fx = fixture_suite["single-loop"]
    with pytest.raises(ValueError):
        run_prefix_benchmark(fx.actions[:1], fx.doms[:2], None)


def test_report_serializes(fixture_suite):
    report = run_fixture_benchmark(fixture_suite["children-sibling"])
    payload = json.loads(json.dumps(report.to_json()))
    assert payload["name"] == "children-sibling"
    assert 0.0 <= payload["accuracy"] <= 1.0
    assert isinstance(report.row(), str)


def test_no_selector_ablation_direction(fixture_suite):
    fx = fixture_suite["class-anchored"]
    full = run_fixture_benchmark(fx)
    ablated = run_fixture_benchmark(fx, config=SynthConfig(no_selector=True))
    assert full.intended_found and not ablated.intended_found
    assert ablated.accuracy < full.accuracy


@pytest.mark.parametrize("seed", [1, 4])
def test_round_trip_holds_across_seeds(seed):
    fixtures = {f.name: f for f in generate_fixture_suite(seed)}
    for name in ("class-anchored", "pagination"):
        report = run_fixture_benchmark(fixtures[name])
        assert report.intended_found, (seed, name)
        assert report.post_accuracy == 1.0, (seed, name)
