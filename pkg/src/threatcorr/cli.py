"""Command-line entry point: ``threatcorr run SCENARIO``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .mass import TotalConflict
from .report import render_structured, render_table
from .resolver import resolve
from .routes import select_route
from .scenario import BUNDLED, ParseError, ValidationError, dumps, load_scenario

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_TOTAL_CONFLICT = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threatcorr", description="Evidential threat correlation with conflict resolution.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="resolve a scenario and print the report")
    run.add_argument("scenario_pos", nargs="?", metavar="SCENARIO", help="scenario file or bundled scenario name")
    run.add_argument("--scenario", dest="scenario_opt", metavar="PATH", help="scenario file or bundled scenario name")
    run.add_argument("--threshold", type=float, default=None, help="override the conflict threshold")
    run.add_argument("--format", choices=("table", "structured"), default="table")
    run.add_argument("--trace", action="store_true", help="include rates and conflict attribution for every step")
    run.add_argument("--no-tests", action="store_true", help="skip discrediting-factor tests and discount across the board")
    run.add_argument("--no-routes", action="store_true", help="skip route selection")
    run.add_argument("--figures", metavar="DIR", default=None, help="also write PNG figures into DIR")
    run.add_argument("--seed", type=int, default=None, help="accepted for harness uniformity; the pipeline is deterministic")

    sub.add_parser("list", help="list bundled scenarios")
    show = sub.add_parser("show", help="print a scenario in canonical form")
    show.add_argument("scenario", metavar="SCENARIO")
    return parser


def _run(args) -> str:
    path = args.scenario_opt or args.scenario_pos
    if path is None:
        raise ParseError("no scenario given (use SCENARIO or --scenario PATH)")
    scenario = load_scenario(path)
    if args.threshold is not None:
        if not 0.0 <= args.threshold < 1.0:
            raise ValidationError("--threshold", "must lie in [0, 1)")
        scenario = replace(scenario, threshold=args.threshold)
    trace = resolve(
        scenario.arguments,
        scenario.factors,
        scenario.threshold,
        scenario.min_ratio,
        run_tests=not args.no_tests,
    )
    routes = None
    if scenario.routes and not args.no_routes:
        routes = select_route(scenario.routes, trace.arguments, trace.final, scenario.danger)
    figures: tuple[str, ...] = ()
    if args.figures:
        from .plotting import write_figures

        figures = write_figures(trace, args.figures, scenario.name)
    if args.format == "structured":
        return render_structured(scenario, trace, routes, figures)
    return render_table(scenario, trace, routes, show_trace=args.trace, figures=figures)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            out = "".join(f"{name}\n" for name in BUNDLED)
        elif args.command == "show":
            out = dumps(load_scenario(args.scenario))
        else:
            out = _run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TotalConflict as exc:
        print(f"total conflict: {exc}", file=sys.stderr)
        return EXIT_TOTAL_CONFLICT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
