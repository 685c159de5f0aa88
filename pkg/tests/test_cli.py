"""Command-line entry points, exercised in-process."""

from __future__ import annotations

import json

import pytest

from webrpa.cli import main
from webrpa.harness import example_pagination_site, record_ground_truth
from webrpa.lang import trace_to_text


@pytest.fixture(scope="module")
def trace_file(tmp_path_factory):
    spec, program = example_pagination_site((4, 4, 2))
    actions, doms = record_ground_truth(program, spec, cap=11, absolute=False)
    path = tmp_path_factory.mktemp("traces") / "pagination.json"
    path.write_text(trace_to_text(actions, doms))
    return str(path)


def test_synth_prints_programs_and_predictions(trace_file, capsys):
    assert main(["synth", trace_file]) == 0
    out = capsys.readouterr().out
    assert "generalizing program(s)" in out
    assert "prediction 1:" in out
    assert "while {" in out or "foreach" in out


def test_predict_prints_prediction_lines(trace_file, capsys):
    assert main(["predict", trace_file]) == 0
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert lines and all("action" in obj for obj in lines)


def test_synth_single_action_trace(tmp_path, capsys):
    spec, program = example_pagination_site((4,))
    actions, doms = record_ground_truth(program, spec, cap=1)
    path = tmp_path / "one.json"
    path.write_text(trace_to_text(actions, doms))
    assert main(["synth", str(path)]) == 0
    assert "no prediction" in capsys.readouterr().out


def test_gen_fixtures_and_bench(tmp_path, capsys):
    out_dir = tmp_path / "fixtures"
    assert main(["gen-fixtures", "--seed", "3", "--out", str(out_dir)]) == 0
    capsys.readouterr()
    files = sorted(p.name for p in out_dir.iterdir())
    assert "single-loop.json" in files and len(files) >= 8

    # benchmark just two small fixtures to keep the test quick
    small = tmp_path / "small"
    small.mkdir()
    for name in ("class-anchored.json", "children-sibling.json"):
        (small / name).write_text((out_dir / name).read_text())
    report_dir = tmp_path / "reports"
    assert main(["bench", str(small), "--out", str(report_dir)]) == 0
    out = capsys.readouterr().out
    assert "class-anchored" in out and "children-sibling" in out
    payload = json.loads((report_dir / "class-anchored.report.json").read_text())
    assert payload["intended_found"] is True


def test_export_emits_program_json(trace_file, capsys):
    assert main(["export", trace_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "statements" in payload


def test_malformed_trace_is_a_clean_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{ nope")
    assert main(["synth", str(path)]) == 1
    assert "error:" in capsys.readouterr().err
