"""Command-line front end: solve, verify, oracle, generate, bench.

Exit codes are a stable contract: 0 success, 1 infeasibility-unresolved,
2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .model import InfeasibleError, NetworkError
from .netgen import (
    assign_balanced_values,
    load_network,
    load_solution,
    save_network,
    save_solution,
    watts_strogatz,
)
from .oracle import brute_force_optimal
from .solver import forward_solve
from .verify import verify_solution

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2


def cmd_solve(args) -> int:
    try:
        network = load_network(args.network)
    except (OSError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        sol, report, stats = forward_solve(
            network,
            weight=args.weight,
            strict_capacity=args.strict_capacity,
            parallel=args.jobs > 1,
        )
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.out:
        save_solution(sol, report, args.out, network=network,
                      cost=stats["cost"], stats={"time_ms": stats["time_ms"]})
    print(
        f"cost={stats['cost']:.6g} time_ms={stats['time_ms']:.3f} "
        f"feasible={str(report.feasible() and not stats['unresolved']).lower()} "
        f"partitions={stats['partitions']} rewires={stats['rewires']}"
    )
    if stats["unresolved"] or not report.feasible():
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        network = load_network(args.network)
    except (OSError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        sol, cost = brute_force_optimal(network, max_n=args.max_n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if sol is None:
        print("infeasible")
        return EXIT_INFEASIBLE
    print(f"{cost:.6g}")
    if args.out:
        report = verify_solution(network, sol)
        save_solution(sol, report, args.out, network=network, cost=cost)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        sol, network, record = load_solution(args.solution)
    except (OSError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if network is None:
        if not args.network:
            print("error: solution file has no embedded network; pass --network",
                  file=sys.stderr)
            return EXIT_INPUT
        try:
            network = load_network(args.network)
        except (OSError, NetworkError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    report = verify_solution(network, sol, tol=1e-6)
    print(
        f"feasible={str(report.feasible()).lower()} "
        f"capacity_ok={str(report.capacity_ok).lower()} "
        f"conservation_ok={str(report.conservation_ok).lower()} "
        f"radial_ok={str(report.radial_ok).lower()}"
    )
    return EXIT_OK if report.feasible() else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    if args.model != "ws":
        print(f"error: unknown model {args.model!r}", file=sys.stderr)
        return EXIT_INPUT
    try:
        graph = watts_strogatz(args.n, args.k, args.beta, seed=args.seed)
        network = assign_balanced_values(
            graph,
            n_sources=args.sources,
            demand_range=(args.demand_lo, args.demand_hi),
            slack=args.slack,
            seed=args.seed,
        )
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        save_network(network, args.out)
        print(f"wrote {args.out}")
    else:
        print(f"generated n={network.node_count} m={len(network.edges)}")
    return EXIT_OK


def _bench_one(size, seed, spec):
    graph = watts_strogatz(size, spec.get("k", 4), spec.get("beta", 0.1), seed=seed)
    network = assign_balanced_values(
        graph,
        n_sources=spec.get("sources", max(2, size // 12)),
        demand_range=tuple(spec.get("demand_range", (1.0, 5.0))),
        slack=spec.get("slack", math.inf),
        seed=seed,
    )
    t0 = time.perf_counter()
    sol, report, stats = forward_solve(network, weight=spec.get("weight", "power"))
    elapsed = (time.perf_counter() - t0) * 1e3
    row = {
        "size": size,
        "seed": seed,
        "time_ms": round(elapsed, 3),
        "cost": round(stats["cost"], 6),
        "feasible": report.feasible() and not stats["unresolved"],
        "gap": "",
    }
    if size <= spec.get("oracle_max_n", 0):
        _, opt = brute_force_optimal(network)
        if math.isfinite(opt) and opt > 0:
            row["gap"] = round((stats["cost"] - opt) / opt, 6)
    return row


def cmd_bench(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid suite spec: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sizes = spec.get("sizes", [])
    seeds = spec.get("seeds", [0])
    jobs = [(size, seed) for size in sizes for seed in seeds]
    if jobs and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(lambda sc: _bench_one(sc[0], sc[1], spec), jobs))
    else:
        rows = [_bench_one(size, seed, spec) for size, seed in jobs]

    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["size", "seed", "time_ms", "cost", "feasible", "gap"]
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    table = buf.getvalue()
    if args.out:
        Path(args.out).write_text(table)
    print(table, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radialflow",
        description="Radial reconfiguration of multi-source distribution networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="construct and verify a radial configuration")
    p.add_argument("network")
    p.add_argument("--weight", choices=["power", "uniform"], default="power")
    p.add_argument("--strict-capacity", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum by spanning-tree enumeration")
    p.add_argument("network")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="verify a solution file")
    p.add_argument("solution")
    p.add_argument("--network", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("--model", default="ws")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--sources", type=int, default=2)
    p.add_argument("--slack", type=float, default=math.inf)
    p.add_argument("--demand-lo", type=float, default=1.0)
    p.add_argument("--demand-hi", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a benchmark suite from a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # keep the exit-code contract for unexpected errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
