"""Command line interface.

    ifrshift project --scenario FILE [--format text|csv] [--summary] [--threshold YEARS ...]
    ifrshift attack-rate --r0 X
    ifrshift compare --scenario FILE [FILE ...] [--format text|csv]
    ifrshift validate FILE

Exit status: 0 on success, 1 on invalid input, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import IfrShiftError
from .fileio import load_scenario, run_scenario, validate_file
from .finalsize import attack_rate
from .projection import compare_scenarios, summarize
from .reporting import CSV, FORMATS, TEXT, render_comparison, render_summary, render_table


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifrshift",
        description="Expected epidemic deaths from age-stratified fatality rates "
                    "with vaccine protection modelled as an age shift.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project deaths for one scenario")
    p.add_argument("--scenario", required=True, metavar="FILE")
    p.add_argument("--format", choices=FORMATS, default=TEXT)
    p.add_argument("--summary", action="store_true", help="append totals and shares")
    p.add_argument("--threshold", type=int, action="append", default=[], metavar="YEARS",
                   help="report the share of deaths at reported ages >= YEARS (repeatable)")

    a = sub.add_parser("attack-rate", help="final epidemic size for a given R0")
    a.add_argument("--r0", type=float, required=True)

    c = sub.add_parser("compare", help="compare several scenarios side by side")
    c.add_argument("--scenario", required=True, nargs="+", metavar="FILE")
    c.add_argument("--format", choices=FORMATS, default=TEXT)

    v = sub.add_parser("validate", help="check a dataset or scenario file")
    v.add_argument("file")
    return parser


def _project(args) -> str:
    scenario = load_scenario(args.scenario)
    dt = run_scenario(scenario)
    out = []
    if args.format == TEXT:
        out.append(
            f"{scenario.name}: shift {scenario.shift_years} years, "
            f"vaccinated fraction {scenario.vaccinated_fraction:.4f}, "
            f"attack rate {scenario.attack_rate:.6f}\n\n")
    out.append(render_table(dt, args.format))
    if args.summary or args.threshold:
        out.append("\n")
        out.append(render_summary(summarize(dt, args.threshold), args.format))
    return "".join(out)


def _compare(args) -> str:
    reports = [run_scenario(load_scenario(path)) for path in args.scenario]
    return render_comparison(compare_scenarios(reports), args.format)


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "project":
            text = _project(args)
        elif args.command == "attack-rate":
            text = f"{attack_rate(args.r0):.6f}\n"
        elif args.command == "compare":
            text = _compare(args)
        else:
            validate_file(args.file)
            text = "OK\n"
    except IfrShiftError as e:
        print(f"ifrshift: error: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
