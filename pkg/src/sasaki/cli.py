"""Command line entry point.

Usage:
  sasaki verify SCENARIO_FILE [--format json|csv|text] [--out PATH]
  sasaki verify --scenario NAME [--samples N] [--seed S] [--mode analytic|fd|cross-check]
  sasaki list
  sasaki report --in PATH --format csv

Exit codes: 0 all checks pass, 1 some check failed, 2 the isometric-immersion
precondition failed, 3 usage error (bad arguments, unknown names, bad files).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import PreconditionError, ScenarioNotFoundError
from .report import emit_report, from_json
from .runner import MODES, ScenarioSpec, default_seed, load_spec, run_scenario
from .scenarios import list_scenarios

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sasaki", description="Numerical checks of Sasaki-metric identities.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the check suite for one scenario")
    v.add_argument("file", nargs="?", help="scenario file (JSON)")
    v.add_argument("--scenario", help="builtin scenario name (see `list`)")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int, help="overrides $SASAKI_SEED")
    v.add_argument("--mode", choices=MODES)
    v.add_argument("--format", choices=("json", "csv", "text"), default="json")
    v.add_argument("--out", help="write the report here instead of stdout")

    sub.add_parser("list", help="list builtin scenarios")

    r = sub.add_parser("report", help="convert a saved JSON report")
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--format", choices=("json", "csv", "text"), default="csv")
    r.add_argument("--out")
    return parser


def _write(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _spec_from_args(args) -> ScenarioSpec:
    if args.file and args.scenario:
        raise UsageError("give a scenario file or --scenario, not both")
    if args.file:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        return load_spec(text, samples=args.samples, seed=args.seed, mode=args.mode)
    if not args.scenario:
        raise UsageError("verify needs a scenario file or --scenario NAME")
    return ScenarioSpec(scenario=args.scenario,
                        samples=100 if args.samples is None else args.samples,
                        seed=default_seed() if args.seed is None else args.seed,
                        mode=args.mode or "analytic")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"sasaki: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "list":
            for name, desc in list_scenarios():
                print(f"{name:<32} {desc}")
            return EXIT_OK

        if args.command == "report":
            try:
                report = from_json(Path(args.infile).read_text())
            except OSError as exc:
                raise UsageError(f"cannot read {args.infile}: {exc}") from None
            _write(emit_report(report, args.format), args.out)
            return EXIT_OK

        spec = _spec_from_args(args)
        report = run_scenario(spec)
        _write(emit_report(report, args.format), args.out)
        return EXIT_OK if report.passed else EXIT_FAIL

    except PreconditionError as exc:
        print(f"sasaki: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, ScenarioNotFoundError, ValueError, TypeError) as exc:
        print(f"sasaki: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
