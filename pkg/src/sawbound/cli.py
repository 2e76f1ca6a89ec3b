"""Command line front end: build, solve, ablate, verify.

Exit codes: 0 success, 2 usage, 3 unreadable or corrupt graph file,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

from . import oracle
from .automaton import GraphFileError, build, load_graph, save_graph
from .simplify import Options
from .spectral import optimize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VERIFY = 4

# (line_like, lacking_simpl, two_pass) rows, everything else on, staged off.
ABLATE_COMBOS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 1, 1), (1, 1, 1))


def _add_feature_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-line-like", dest="line_like", action="store_false",
                   help="disable the extra allowance for nearly straight walks")
    p.add_argument("--no-lacking-simpl", dest="lacking_simpl", action="store_false",
                   help="disable the extra allowance for unsimplifiable walks")
    p.add_argument("--no-two-pass", dest="two_pass", action="store_false",
                   help="record children during discovery instead of a second pass")
    p.add_argument("--staged-children", action="store_true",
                   help="also emit children computed with allowances stripped")
    p.add_argument("--no-small-bridges", dest="small_bridges", action="store_false",
                   help="disable U-detour rewrites")
    p.add_argument("--no-large-bridges", dest="large_bridges", action="store_false",
                   help="disable S-detour rewrites")
    p.add_argument("--no-small-loops", dest="small_loops", action="store_false",
                   help="disable loop-shift rewrites")
    p.add_argument("--no-planar-a", dest="planar_a", action="store_false",
                   help="disable move pruning from walk windings around A")
    p.add_argument("--no-planar-b", dest="planar_b", action="store_false",
                   help="disable move pruning when B gets sealed in")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-10,
                   help="power iteration gap target (default 1e-10)")
    p.add_argument("--max-iter", type=int, default=100_000,
                   help="power iteration cap per round (default 100000)")
    p.add_argument("--rounds", type=int, default=50,
                   help="reselection rounds (default 50)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads; overridden by SAW_BOUND_THREADS "
                        "(reserved, the computation is sequential)")
    p.add_argument("--report", metavar="PATH", help="write a run report to PATH")
    p.add_argument("--format", choices=("json", "text", "csv"), default="json",
                   help="report format (default json)")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sawbound",
        description="Certified upper bounds on the square-lattice "
                    "self-avoiding-walk growth constant.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a state graph and save it")
    p.add_argument("--k", type=int, required=True, help="size budget (even, 4..40)")
    p.add_argument("--out", help="output path (default saw-k<k>.graph)")
    _add_feature_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="compute a certified bound from a graph file")
    p.add_argument("--graph", required=True, help="graph file from build")
    _add_solver_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("ablate", help="bound/state table over feature combinations")
    p.add_argument("--k", type=int, required=True, help="size budget (even, 4..40)")
    _add_solver_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("verify", help="exhaustive cross-checks of a graph file")
    p.add_argument("--graph", required=True, help="graph file from build")
    p.add_argument("--n-max", type=int, default=8,
                   help="continuation length for the coverage check (default 8)")
    p.set_defaults(func=cmd_verify)

    return parser


def _threads(args) -> int:
    env = os.environ.get("SAW_BOUND_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, args.threads)


def _options(args) -> Options:
    return Options(
        line_like=args.line_like,
        lacking_simpl=args.lacking_simpl,
        small_bridges=args.small_bridges,
        large_bridges=args.large_bridges,
        small_loops=args.small_loops,
        two_pass=args.two_pass,
        staged_children=args.staged_children,
        planar_a=args.planar_a,
        planar_b=args.planar_b,
    )


def _options_dict(opts: Options) -> dict:
    return {name: getattr(opts, name) for name in Options._BIT_FIELDS}


def _flatten(report: dict) -> list[tuple[str, str]]:
    items = []
    for key, value in report.items():
        if isinstance(value, dict):
            items.extend((f"{key}.{sub}", leaf) for sub, leaf in _flatten(value))
        elif isinstance(value, (list, tuple)):
            items.append((key, ";".join(str(v) for v in value)))
        else:
            items.append((key, str(value)))
    return items


def _write_report(report: dict | list, path: str, fmt: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "json":
            json.dump(report, fh, indent=2)
            fh.write("\n")
            return
        rows = report if isinstance(report, list) else [report]
        flat = [_flatten(r) for r in rows]
        if fmt == "csv":
            fh.write(",".join(key for key, _ in flat[0]) + "\n")
            for r in flat:
                fh.write(",".join(value for _, value in r) + "\n")
        else:
            for r in flat:
                for key, value in r:
                    fh.write(f"{key}: {value}\n")


def cmd_build(args) -> int:
    opts = _options(args)
    threads = _threads(args)
    t0 = time.perf_counter()
    g = build(args.k, opts)
    out = args.out or f"saw-k{args.k}.graph"
    nbytes = save_graph(g, out)
    wall = time.perf_counter() - t0
    print(f"states: {len(g)}")
    print(f"wrote {out}: {nbytes} bytes in {wall:.1f}s")
    if args.report:
        report = {
            "config": {"k": args.k, "options": _options_dict(opts), "threads": threads},
            "states": len(g),
            "file_bytes": nbytes,
            "wall_time_s": wall,
        }
        _write_report(report, args.report, args.format)
    return EXIT_OK


def cmd_solve(args) -> int:
    threads = _threads(args)
    t0 = time.perf_counter()
    g = load_graph(args.graph)
    res = optimize(g, rounds=args.rounds, tol=args.tol, max_iter=args.max_iter)
    wall = time.perf_counter() - t0
    print(f"bound: {res.lambda_hi:.9f}")
    if args.report:
        report = {
            "config": {
                "k": g.k,
                "options": _options_dict(g.options),
                "tol": args.tol,
                "max_iter": args.max_iter,
                "rounds": args.rounds,
                "threads": threads,
            },
            "states": len(g),
            "file_bytes": os.path.getsize(args.graph),
            "bound": res.lambda_hi,
            "lambda_lo": res.lambda_lo,
            "rounds_used": res.rounds_used,
            "wall_time_s": wall,
            "round_bounds": res.round_bounds,
            "converged": res.converged,
        }
        _write_report(report, args.report, args.format)
    return EXIT_OK


def cmd_ablate(args) -> int:
    rows = []
    print("line_like,lacking_simpl,two_pass,bound,states", flush=True)
    for line_like, lacking, two_pass in ABLATE_COMBOS:
        opts = Options(
            line_like=bool(line_like),
            lacking_simpl=bool(lacking),
            two_pass=bool(two_pass),
        )
        g = build(args.k, opts)
        res = optimize(g, rounds=args.rounds, tol=args.tol, max_iter=args.max_iter)
        print(f"{line_like},{lacking},{two_pass},{res.lambda_hi:.9f},{len(g)}", flush=True)
        rows.append({
            "line_like": line_like,
            "lacking_simpl": lacking,
            "two_pass": two_pass,
            "bound": res.lambda_hi,
            "states": len(g),
        })
    if args.report:
        _write_report(rows, args.report, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    if g.k > 10:
        print("error: verify needs a graph with k <= 10", file=sys.stderr)
        return EXIT_USAGE
    n_max = min(args.n_max, 12)
    failed = False

    def outcome(ok: bool, name: str, detail: str = "") -> None:
        nonlocal failed
        failed = failed or not ok
        tail = f": {detail}" if detail else ""
        print(f"{'PASS' if ok else 'FAIL'} {name}{tail}")

    g2 = build(g.k, g.options)
    outcome(g2 == g, "children-recomputation",
            f"{len(g)} states" if g2 == g else "stored graph differs from a rebuild")

    bad = oracle.soundness_check(g)
    outcome(not bad, "soundness",
            "no rewrite forbids a live continuation" if not bad
            else f"{len(bad)} violations, first {bad[0]!r}")

    cover = g if not g.options.planar_a else build(g.k, replace(g.options, planar_a=False))
    checked, witnesses = oracle.never_undercount_check(cover, n_max)
    expected = oracle.count_line_continuations(g.k, n_max)
    cover_ok = not witnesses and checked == expected
    outcome(cover_ok, "coverage",
            f"{checked} continuations tracked" if cover_ok
            else (f"lost walk {witnesses[0].hex()}" if witnesses
                  else f"followed {checked} of {expected} continuations"))

    if g.k <= 8:
        erasure = build(g.k, Options(
            line_like=False, lacking_simpl=False, small_bridges=False,
            large_bridges=False, small_loops=False, planar_a=False, planar_b=False,
        ))
        mismatches = [
            n for n in range(min(n_max, 12) + 1)
            if oracle.unroll(erasure, n) != oracle.count_line_extensions(n, g.k)
        ]
        outcome(not mismatches, "erasure-exactness",
                f"exact through n={min(n_max, 12)}" if not mismatches
                else f"first mismatch at n={mismatches[0]}")
    else:
        print("SKIP erasure-exactness (needs k <= 8)")

    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
