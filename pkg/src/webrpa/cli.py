"""Command-line entry points: synthesize from a trace file, predict next
actions, run prefix benchmarks over fixture files, generate fixtures, and
serve the interactive session API."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import (
    BenchmarkReport,
    Fixture,
    generate_fixture_suite,
    read_fixture_files,
    run_fixture_benchmark,
    write_fixture_files,
)
from .lang import ParseError, pretty_program, program_to_json, trace_from_text
from .synthesis import SynthConfig, synthesize


def _config_from_args(args) -> SynthConfig:
    return SynthConfig(
        budget_s=args.timeout / 1000.0,
        no_selector=args.no_selector,
        incremental=not args.no_incremental,
    )


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--timeout", type=int, default=1000,
                        help="synthesis budget per call, in milliseconds")
    parser.add_argument("--no-selector", action="store_true",
                        help="disable alternative selectors (ablation)")
    parser.add_argument("--no-incremental", action="store_true",
                        help="discard synthesis state between runs (ablation)")


def _load_trace(path: str, data_path: str | None):
    with open(path) as fh:
        actions, doms, data = trace_from_text(fh.read())
    if data_path is not None:
        with open(data_path) as fh:
            data = json.load(fh)
    return actions, doms, data


def _cmd_synth(args) -> int:
    actions, doms, data = _load_trace(args.trace, args.data)
    result = synthesize(actions, doms, data, _config_from_args(args))
    if not result.programs:
        print("no generalizing program found; no prediction")
        return 0
    print(f"{len(result.programs)} generalizing program(s); "
          f"{len(result.predictions)} distinct prediction(s)\n")
    for i, program in enumerate(result.programs[: args.top]):
        print(f"--- program {i + 1}")
        print(pretty_program(program))
        print()
    for i, pred in enumerate(result.predictions):
        sel = f" {pred.action.selector}" if pred.action.selector is not None else ""
        print(f"prediction {i + 1}: {pred.action.kind}{sel}")
    return 0


def _cmd_predict(args) -> int:
    actions, doms, data = _load_trace(args.trace, args.data)
    result = synthesize(actions, doms, data, _config_from_args(args))
    if not result.predictions:
        print("no prediction")
        return 0
    for pred in result.predictions:
        obj = {"action": pred.action.kind}
        if pred.action.selector is not None:
            obj["selector"] = str(pred.action.selector)
        if pred.action.text is not None:
            obj["text"] = pred.action.text
        if pred.action.value_path is not None:
            obj["value_path"] = str(pred.action.value_path)
        obj["target_node_id"] = pred.target_node_id
        print(json.dumps(obj))
    return 0


def _cmd_bench(args) -> int:
    fixtures = read_fixture_files(args.fixture_dir)
    if not fixtures:
        print(f"no fixture files in {args.fixture_dir}", file=sys.stderr)
        return 1
    config = _config_from_args(args)
    reports = []
    print(BenchmarkReport.header())
    for fixture in fixtures:
        report = run_fixture_benchmark(fixture, config=config,
                                       timeout_s=args.timeout / 1000.0)
        reports.append(report)
        print(report.row())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for report in reports:
            path = os.path.join(args.out, f"{report.name}.report.json")
            with open(path, "w") as fh:
                json.dump(report.to_json(), fh, indent=2)
        print(f"\nreports written to {args.out}")
    return 0


def _cmd_gen_fixtures(args) -> int:
    fixtures = generate_fixture_suite(args.seed)
    paths = write_fixture_files(fixtures, args.out)
    for path in paths:
        print(path)
    return 0


def _cmd_export(args) -> int:
    actions, doms, data = _load_trace(args.trace, args.data)
    result = synthesize(actions, doms, data, _config_from_args(args))
    if not result.programs:
        print("no generalizing program found", file=sys.stderr)
        return 1
    print(json.dumps(program_to_json(result.programs[0]), indent=2))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    extra = None
    if args.fixture and os.path.exists(args.fixture):
        with open(args.fixture) as fh:
            extra = [Fixture.from_json(json.load(fh))]
        default = extra[0].name
    else:
        default = args.fixture or "store-locator"
    ui_dir = args.ui or os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
    app = create_app(seed=args.seed, default_fixture=default, extra_fixtures=extra,
                     ui_dir=os.path.abspath(ui_dir))
    port = args.port or int(os.environ.get("WEBRPA_PORT", "8800"))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="webrpa",
        description="synthesize loopy web-automation programs from recorded traces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize programs from a trace file")
    p.add_argument("trace")
    p.add_argument("--data", help="JSON input-data file overriding the trace's")
    p.add_argument("--top", type=int, default=3, help="programs to print")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("predict", help="print only the deduplicated next-action predictions")
    p.add_argument("trace")
    p.add_argument("--data")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("bench", help="run prefix benchmarks over a fixture directory")
    p.add_argument("fixture_dir")
    p.add_argument("--out", help="directory for per-fixture JSON reports")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen-fixtures", help="write the deterministic fixture suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_fixtures)

    p = sub.add_parser("export", help="print the top-ranked program as JSON")
    p.add_argument("trace")
    p.add_argument("--data")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("serve", help="start the interactive session service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--fixture", help="fixture name or fixture JSON file for new sessions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ui", help="directory with the built web UI to serve at /ui")
    p.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
