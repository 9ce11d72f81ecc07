"""Desk benchmark on small-world networks, with oracle gaps where tractable.

Generates Watts-Strogatz topologies (k=4, beta=0.1) with balanced random
values, solves each, and prints a plot-ready table. At oracle scale (n <= 10
here) the optimality gap is measured exactly; at 120..400 nodes only
feasibility and wall time are reported.
"""

import time

from radialflow import assign_balanced_values, forward_solve, watts_strogatz
from radialflow.oracle import brute_force_optimal

print("size,seed,time_ms,cost,feasible,gap")
for n in (8, 10, 120, 240, 400):
    for seed in range(3):
        graph = watts_strogatz(n, 4, 0.1, seed=seed)
        net = assign_balanced_values(
            graph, n_sources=max(2, n // 20), slack=3.0, seed=seed
        )
        t0 = time.perf_counter()
        sol, report, stats = forward_solve(net)
        elapsed_ms = (time.perf_counter() - t0) * 1e3
        gap = ""
        if n <= 10:
            _, opt = brute_force_optimal(net)
            if opt > 0:
                gap = f"{(stats['cost'] - opt) / opt:.4f}"
        feasible = report.feasible() and not stats["unresolved"]
        print(f"{n},{seed},{elapsed_ms:.1f},{stats['cost']:.2f},{feasible},{gap}")
