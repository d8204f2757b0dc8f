"""Command-line interface.

Exit codes follow the competition convention: 10 for satisfiable, 20 for
unsatisfiable, 0 otherwise (timeouts, generation, benchmarks).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bench import emit_stats, run_benchmark
from .extended import AnalysisConfig, StopCriterion, StopKind, WeakeningStrategy
from .generators import FamilySpec, gen_pigeonhole
from .model import lit_str
from .opb import parse_opb, write_opb
from .solver import Limits, Scripted, solve

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_OTHER = 0


def _parse_decisions(text: str) -> list[int]:
    """Decision scripts accept ``x3`` / ``~x3`` tokens or signed integers."""
    decisions = []
    for tok in text.split():
        if tok.startswith("~x"):
            decisions.append(-int(tok[2:]))
        elif tok.startswith("x"):
            decisions.append(int(tok[1:]))
        else:
            decisions.append(int(tok))
    return decisions


def _config_from_args(args) -> AnalysisConfig:
    if args.mode == "regular":
        return AnalysisConfig.regular()
    stop = StopCriterion.from_name(args.stop)
    if stop.kind is StopKind.UNTIL_HIGHLEVEL and args.high_fraction:
        stop = StopCriterion(stop.kind, Fraction(args.high_fraction))
    return AnalysisConfig(
        extended=True,
        weakening=WeakeningStrategy.from_name(args.weaken),
        stop=stop,
    )


def cmd_solve(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        instance = parse_opb(fh.read())
    heuristic = None
    if args.decisions:
        with open(args.decisions, encoding="utf-8") as fh:
            heuristic = Scripted(_parse_decisions(fh.read()))
    limits = Limits(max_conflicts=args.max_conflicts, max_seconds=args.timeout)
    result = solve(
        instance.constraints,
        config=_config_from_args(args),
        heuristic=heuristic,
        num_vars=instance.variable_count,
        limits=limits,
    )
    if result.status == "sat":
        print("s SATISFIABLE")
        lits = [v if value else -v for v, value in sorted(result.model.items())]
        print("v " + " ".join(lit_str(l) for l in lits))
    elif result.status == "unsat":
        print("s UNSATISFIABLE")
    else:
        print("s UNKNOWN")
    stats = result.stats.as_dict()
    print(
        "c conflicts={conflicts} cancellations={cancellations} "
        "improved_backjumps={improved_backjumps} total_backjumps={total_backjumps} "
        "wall_time={wall_time:.3f}".format(**stats)
    )
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as fh:
            json.dump({"verdict": result.status, **stats}, fh, indent=2)
            fh.write("\n")
    return {"sat": EXIT_SAT, "unsat": EXIT_UNSAT}.get(result.status, EXIT_OTHER)


def cmd_gen(args) -> int:
    if args.family != "pigeonhole":
        raise SystemExit(f"unknown family {args.family!r}")
    text = write_opb(gen_pigeonhole(args.n))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OTHER


def cmd_bench(args) -> int:
    specs = [FamilySpec.parse(s) for s in args.families.split(",")]
    configs = [AnalysisConfig.from_name(c) for c in args.configs.split(",")]
    limits = Limits(max_conflicts=args.max_conflicts, max_seconds=args.timeout)
    rows = run_benchmark(specs, configs, limits=limits, jobs=args.jobs)
    fmt = "json" if args.out.endswith(".json") else "csv"
    emit_stats(rows, fmt=fmt, destination=args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OTHER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pbsolve")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an OPB file")
    p_solve.add_argument("file")
    p_solve.add_argument("--mode", choices=["regular", "extended"], default="regular")
    p_solve.add_argument("--weaken", choices=["never", "any", "ordered"], default="any")
    p_solve.add_argument("--stop", choices=["bjlevel", "toplevel", "highlevel"], default="bjlevel")
    p_solve.add_argument("--high-fraction", default=None, help="fraction for --stop highlevel")
    p_solve.add_argument("--decisions", help="file with a scripted decision sequence")
    p_solve.add_argument("--stats", help="write run statistics to this JSON file")
    p_solve.add_argument("--max-conflicts", type=int, default=None)
    p_solve.add_argument("--timeout", type=float, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("gen", help="generate an instance")
    p_gen.add_argument("family", choices=["pigeonhole"])
    p_gen.add_argument("n", type=int)
    p_gen.add_argument("-o", "--output")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="compare configurations over families")
    p_bench.add_argument("--families", required=True, help="e.g. pigeonhole:4..8,pattern:10")
    p_bench.add_argument(
        "--configs",
        required=True,
        help="e.g. regular,extended/weaken-any/until-bjlevel",
    )
    p_bench.add_argument("--out", required=True, help="output .csv or .json path")
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.add_argument("--max-conflicts", type=int, default=10**6)
    p_bench.add_argument("--timeout", type=float, default=60.0)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
