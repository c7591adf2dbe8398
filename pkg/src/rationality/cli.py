"""Command-line entry points.

Subcommands:

* ``analyze <dataset.csv> [--efficiency E] [--json]``: score one choice
  log (violations, critical cost efficiency, decision series).
* ``simulate --config <file> [--seed N] [--out DIR]``: run a configured
  experiment, write datasets and reports under DIR, print the table.
* ``report <results-dir> [--format table|csv|json]``: re-render the
  report written by ``simulate``.
* ``gen-tasks [--rounds N] [--budget B] [--risk low|high] [--seed N]
  [--out FILE]``: emit a session's rounds as a task CSV.

Exit codes: 0 success, 1 validation or parse error, 2 I/O or protocol
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .agents import PRICE_REGIMES, SessionConfig, generate_session
from .experiment import (
    analysis_to_dict,
    analyze_dataset,
    export_report,
    load_config,
    report_from_json,
    run_experiment,
    save_experiment,
    save_tasks,
)
from .protocol import ProtocolError

__all__ = ["main"]


def _cmd_analyze(args: argparse.Namespace) -> int:
    analysis = analyze_dataset(args.dataset, level=args.efficiency)
    payload = analysis_to_dict(analysis)
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    order = (
        "label",
        "observations",
        "goods",
        "level",
        "garp_violations",
        "warp_violations",
        "ccei",
    )
    for key in order:
        print(f"{key:<18} {payload[key]}")
    if payload["garp_pairs"]:
        pairs = " ".join(f"({i},{j})" for i, j in payload["garp_pairs"])
        print(f"{'garp_pairs':<18} {pairs}")
    flags = {
        name: payload[name]
        for name in ("underspend_rounds", "overspend_rounds", "zero_bundle_rounds")
        if payload[name]
    }
    for name, rounds in flags.items():
        print(f"{name:<18} {rounds}")
    if not flags:
        print(f"{'budget_discipline':<18} clean")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    result = run_experiment(config)
    report = save_experiment(result, args.out)
    print(export_report(report, "table"), end="")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    text = (Path(args.results_dir) / "report.json").read_text(encoding="utf-8")
    print(export_report(report_from_json(text), args.format), end="")
    return 0


def _cmd_gen_tasks(args: argparse.Namespace) -> int:
    config = SessionConfig(
        rounds=args.rounds, budget=args.budget, risk_regime=args.risk, seed=args.seed
    )
    text = save_tasks(generate_session(config), args.out)
    if args.out is None:
        print(text, end="")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rationality",
        description="Revealed-preference rationality metrics and agent simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="score one dataset file")
    analyze.add_argument("dataset", help="path to a choice-log CSV")
    analyze.add_argument(
        "--efficiency",
        type=float,
        default=1.0,
        help="efficiency level for the violation reports (default 1.0)",
    )
    analyze.add_argument("--json", action="store_true", help="emit JSON instead of text")
    analyze.set_defaults(handler=_cmd_analyze)

    simulate = sub.add_parser("simulate", help="run a configured experiment")
    simulate.add_argument("--config", required=True, help="TOML experiment config")
    simulate.add_argument("--seed", type=int, default=None, help="override the master seed")
    simulate.add_argument("--out", default="results", help="output directory (default ./results)")
    simulate.set_defaults(handler=_cmd_simulate)

    report = sub.add_parser("report", help="re-render a saved report")
    report.add_argument("results_dir", help="directory written by simulate")
    report.add_argument(
        "--format", choices=("table", "csv", "json"), default="table", help="output format"
    )
    report.set_defaults(handler=_cmd_report)

    gen = sub.add_parser("gen-tasks", help="emit a session's rounds as CSV")
    gen.add_argument("--rounds", type=int, default=25)
    gen.add_argument("--budget", type=float, default=100.0)
    gen.add_argument("--risk", choices=sorted(PRICE_REGIMES), default="high")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="write to a file instead of stdout")
    gen.set_defaults(handler=_cmd_gen_tasks)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.handler(args)
    except ValueError as err:  # parse, config, and domain validation errors
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ProtocolError as err:
        print(f"protocol error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
