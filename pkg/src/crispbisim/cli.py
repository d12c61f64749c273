"""Command-line front end: run, check, bench, gen.

Exit codes: 0 success, 1 usage or input error, 2 check/bound failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as benchmod
from .api import default_backend, run
from .checking import run_check
from .graph import GraphFormatError, parse_graph
from .oracle import random_graph

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str):
    if path == "-":
        return parse_graph(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def cmd_run(args) -> int:
    try:
        g = _read_graph(args.input)
        report = run(g, counting=args.counting, backend=args.backend)
    except (OSError, GraphFormatError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    s = report.stats
    if args.format == "json":
        doc = report.to_json()
        # wall time goes to stderr so stdout stays byte-identical between runs
        doc["stats"].pop("seconds")
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(report.partition.to_text())
        print(f"# n={s.n} m={s.m} l={s.l} blocks={s.blocks} splits={s.split_calls} "
              f"backend={s.backend}", file=sys.stderr)
    print(f"# seconds={s.seconds:.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.cases == 0:
        print("warning: 0 cases requested, nothing checked", file=sys.stderr)
    result = run_check(args.cases, args.seed, args.n, args.m, args.l, args.labels)
    print(result.summary())
    if not result.ok:
        print(result.detail, file=sys.stderr)
        print("# counterexample graph:", file=sys.stderr)
        sys.stderr.write(result.counterexample.to_text())
        return EXIT_FAIL
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else list(benchmod.DEFAULT_SIZES)
    backends = None if args.backend == "both" else [args.backend]
    modes = {"plain": (False,), "counting": (True,), "both": (False, True)}[args.mode]
    rows = benchmod.bench(sizes, seed=args.seed, density=args.density, l=args.l, labels=args.labels,
                          backends=backends, modes=modes, repeats=args.repeats)
    spread = benchmod.ratio_spread(rows)
    if args.format == "json":
        print(json.dumps({
            "rows": [r.as_dict() for r in rows],
            "ratio_spread": {f"{b}/{'counting' if c else 'plain'}": v for (b, c), v in spread.items()},
            "speedup": {f"{n}/{'counting' if c else 'plain'}": v for (n, c), v in benchmod.speedups(rows).items()},
        }, indent=2))
    else:
        print(benchmod.format_table(rows))
        for (b, c), v in sorted(spread.items()):
            flag = "ok" if v < 8 else "ADVISORY: >= 8x"
            print(f"# ratio spread {b}/{'counting' if c else 'plain'}: {v:.2f}x ({flag})")
        for (n, c), v in sorted(benchmod.speedups(rows).items()):
            print(f"# speedup compiled vs python n={n} {'counting' if c else 'plain'}: {v:.1f}x")
    bad = [r for r in rows if not r.bounds_ok]
    for r in bad:
        print(f"error: bound violated at n={r.n} backend={r.backend}: participation "
              f"{r.max_participation} > {r.participation_bound} or half ratio {r.max_half_ratio}",
              file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_gen(args) -> int:
    try:
        g = random_graph(args.n, args.m, args.l, args.labels, args.seed, args.vertex_labels)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = g.to_text()
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crispbisim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="compute the bisimulation partition of a graph file")
    p.add_argument("-i", "--input", required=True, help="graph file, or - for stdin")
    p.add_argument("--counting", action="store_true", help="bisimulation with counting successors")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="cross-check engines against brute-force oracles")
    p.add_argument("--cases", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10, help="max vertices")
    p.add_argument("--m", type=int, default=40, help="max edges")
    p.add_argument("--l", type=int, default=6, help="max distinct degrees")
    p.add_argument("--labels", type=int, default=2, help="max edge labels")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="scaling benchmark, compiled vs python")
    p.add_argument("--sizes", help="comma separated vertex counts (default 1024..16384)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=int, default=4, help="edges per vertex")
    p.add_argument("--l", type=int, default=8, help="degree pool size")
    p.add_argument("--labels", type=int, default=1)
    p.add_argument("--backend", choices=("both", "compiled", "python"),
                   default="both" if default_backend() == "compiled" else "python")
    p.add_argument("--mode", choices=("plain", "counting", "both"), default="both")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a random graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--labels", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertex-labels", type=int, default=0, help="distinct degrees for vertex symbol p")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
