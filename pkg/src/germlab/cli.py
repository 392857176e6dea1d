"""germlab command line interface."""

from __future__ import annotations

import argparse
import sys
import time

from .analyzer import AnalysisReport, GermFileError, run
from .jets import DEFAULT_DEGREE
from .poly import PolyParseError

COMMANDS = ("analyze", "lift", "substantial", "weak", "qh", "mu-tau")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="germlab",
        description="Exact analysis of polynomial map-germs: liftable fields, "
        "codimensions, substantial unfoldings, quasi-homogeneity.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="germ definition file (function file for mu-tau)")
    ap.add_argument("--degree", type=int, default=DEFAULT_DEGREE, metavar="N",
                    help=f"jet/search degree bound (default {DEFAULT_DEGREE})")
    ap.add_argument("--json", action="store_true", help="emit the JSON report on stdout")
    ap.add_argument("--construct-coords", action="store_true",
                    help="on a YES qh verdict, also construct weighted-homogeneous coordinates")
    ap.add_argument("--lift-file", metavar="PATH", default=None,
                    help="externally supplied lift generators (JSON) instead of the discriminant route")
    ap.add_argument("--timings", action="store_true", help="print wall time to stderr")
    return ap


def _human(report: AnalysisReport) -> str:
    lines = [f"germlab {report.command} (degree {report.degree}) — {report.status}"]
    comps = report.input.get("components")
    if comps:
        lines.append(f"  germ: ({', '.join(report.input.get('source', []))}) -> ({', '.join(comps)})")
    for key, value in report.results.items():
        if isinstance(value, dict) and "status" in value:
            extra = ""
            if value.get("witness") and isinstance(value["witness"], dict) and "field" in value["witness"]:
                extra = f"  witness field: ({', '.join(value['witness']['field'])})"
            lines.append(f"  {key}: {value['status']}{extra}")
        elif isinstance(value, dict) and "generators" in value:
            lines.append(f"  {key}: {len(value['generators'])} generator(s)")
            for g in value["generators"]:
                lines.append(f"    ({', '.join(g)})")
        else:
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        report = run(
            args.command,
            args.file,
            args.degree,
            construct_coords=args.construct_coords,
            lift_path=args.lift_file,
        )
    except (GermFileError, PolyParseError) as exc:
        print(f"germlab: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"germlab: {exc}", file=sys.stderr)
        return 2
    if args.timings:
        print(f"elapsed: {time.monotonic() - t0:.3f}s", file=sys.stderr)
    if args.json:
        print(report.to_json())
    else:
        print(_human(report))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
