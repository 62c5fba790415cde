"""Command-line interface.

Exit codes: 0 feasible / ok, 2 infeasible / violations found, 1 any error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench, pipeline
from .decomposition import DecompositionError, read_td
from .generate import gen_random
from .instance import InstanceFormatError, parse_instance, read_walk, write_instance, write_walk
from .oracle import OracleBudgetExceeded, brute_force_min_cost, verify_walk
from .partitions import WeightOverflowError
from .unify import Infeasible, unify

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_instance(path):
    with open(path) as fh:
        return parse_instance(fh)


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    return lo, hi


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_solve(args, out) -> int:
    inst = _load_instance(args.file)
    td = None
    if args.td:
        with open(args.td) as fh:
            td = read_td(fh)
    sol = pipeline.run(inst, td, walk=args.walk)
    report = sol.report
    if args.json:
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        out.write(f"instance n={report.n} m={report.m} waypoints={report.waypoints}\n")
        if report.unified_n is not None:
            out.write(f"unified n={report.unified_n} m={report.unified_m} width={report.width}\n")
        if report.feasible:
            if sol.walk is not None:
                out.write(write_walk(sol.walk))
            else:
                out.write(f"cost {report.cost}\n")
        else:
            out.write(f"infeasible: {report.reason}\n")
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_oracle(args, out) -> int:
    inst = _load_instance(args.file)
    try:
        u = unify(inst)
    except Infeasible as exc:
        out.write(f"infeasible: {exc.reason}\n")
        return EXIT_INFEASIBLE
    cost = brute_force_min_cost(u)
    if cost is None:
        out.write("infeasible\n")
        return EXIT_INFEASIBLE
    if u.gadget is not None:
        cost -= sum(u.edges[e].weight for e in u.gadget.edges)
    out.write(f"cost {cost}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    inst = _load_instance(args.file)
    with open(args.walk_file) as fh:
        walk = read_walk(fh)
    problems = verify_walk(walk, inst)
    if problems:
        for p in problems:
            out.write(f"violation: {p}\n")
        return EXIT_INFEASIBLE
    out.write("ok\n")
    return EXIT_OK


def cmd_gen(args, out) -> int:
    inst = gen_random(args.n, args.p, args.caps, args.weights, args.waypoints, args.seed,
                      distinct_terminals=args.distinct_terminals)
    write_instance(inst, out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    rows = bench.run_bench(args.family, args.sizes, args.widths, args.seed, args.repeat)
    out.write(bench.to_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wrp", description="Waypoint routing on bounded-treewidth graphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance with the treewidth DP")
    p.add_argument("file")
    p.add_argument("--td", help="tree decomposition of the instance graph (PACE .td)")
    p.add_argument("--walk", action="store_true", help="reconstruct, verify and print a walk")
    p.add_argument("--json", action="store_true", help="emit the run report as JSON")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap (the DP currently runs on one worker)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive reference solve (small instances)")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="check a walk file against an instance")
    p.add_argument("file")
    p.add_argument("--walk-file", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="print a random connected instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--caps", type=_range, default=(1, 2))
    p.add_argument("--weights", type=_range, default=(1, 5))
    p.add_argument("--waypoints", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distinct-terminals", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the solver on a graph family, CSV output")
    p.add_argument("--family", choices=bench.FAMILIES, default="caterpillar")
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--widths", type=_int_list, default=[1], help="path powers to run (pathpower only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args, out)
    except (UsageError, InstanceFormatError, DecompositionError, OracleBudgetExceeded,
            WeightOverflowError, OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
