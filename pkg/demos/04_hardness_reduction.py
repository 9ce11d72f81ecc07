"""Feasibility alone is as hard as the Partition Problem.

The reduction builds two sources and sinks v0..vn, with v0's two lines sized
at half its demand so it must draw from both sources, and every other sink
capacity-matched to exactly one source's share. A feasible radial
configuration then exists iff the multiset splits into two equal halves.
This script sweeps small multisets and shows the oracle's verdict tracking
the subset-sum answer exactly, and the constructive solver succeeding
precisely on the yes-instances.
"""

from radialflow import forward_solve
from radialflow.oracle import (
    brute_force_feasible,
    has_equal_partition,
    partition_reduction_instance,
)

cases = [
    [3, 3],
    [3, 5],
    [2, 2],
    [1],
    [3, 4, 5, 4],
    [1, 2, 3],
    [6, 6, 6],
    [5, 4, 3, 2, 1, 1],
]

print(f"{'multiset':>20s}  {'partition?':>10s}  {'oracle':>8s}  {'solver':>8s}")
for a_values in cases:
    net = partition_reduction_instance(a_values, 2)
    expected = has_equal_partition(a_values)
    oracle = brute_force_feasible(net)
    _, report, stats = forward_solve(net)
    solved = report.feasible() and not stats["unresolved"]
    print(f"{str(a_values):>20s}  {str(expected):>10s}  {str(oracle):>8s}  "
          f"{str(solved):>8s}")
    assert oracle == expected
    assert solved == expected
print("\nsolver verdicts match the Partition Problem on every case")
