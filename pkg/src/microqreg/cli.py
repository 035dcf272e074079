"""Command line: ``microqreg run|list|describe``."""

from __future__ import annotations

import argparse
import sys

from .scenario import KINDS, ScenarioError, describe, list_scenarios, parse_scenario, run


def _cmd_run(args) -> int:
    try:
        scenario = parse_scenario(args.scenario)
    except ScenarioError as exc:
        print(exc, file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(exc, file=sys.stderr)
        return 2
    summary = run(scenario, out_dir=args.out, seed=args.seed)
    for key, value in summary.headline.items():
        print(f"{key:32s} {value}")
    for check in summary.checks:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"[{status}] {check['quantity']} = {check['value']} (expect {check['expect']})")
    return 0 if summary.passed else 1


def _cmd_list(args) -> int:
    for name, kind, description in list_scenarios():
        print(f"{name:24s} {kind:22s} {description}")
    return 0


def _cmd_describe(args) -> int:
    try:
        print(describe(args.kind))
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="microqreg", description="Neutral-atom microtrap register simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file (or shipped scenario name)")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.set_defaults(func=_cmd_run)

    p_list = sub.add_parser("list", help="list shipped scenarios")
    p_list.set_defaults(func=_cmd_list)

    p_desc = sub.add_parser("describe", help="show the config schema of an experiment kind")
    p_desc.add_argument("kind", help=" | ".join(KINDS))
    p_desc.set_defaults(func=_cmd_describe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
