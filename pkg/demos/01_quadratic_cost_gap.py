"""Why the cheapest spanning tree is not the cheapest radial configuration.

A single source feeds five unit sinks around a 6-cycle. Because losses grow
with the square of the flow, the minimum-spanning-tree orientation (which
drops the expensive edge entirely) concentrates flow on one long chain and
loses to a configuration that pays for the expensive edge but splits the
flow. The exact oracle confirms the split configuration is optimal, and the
constructive solver lands on it.
"""

from radialflow import evaluate_cost, forward_solve
from radialflow.fixtures import (
    fig2_mst_solution,
    fig2_network,
    fig2_optimal_solution,
)
from radialflow.oracle import brute_force_optimal

net = fig2_network()
print(f"network: {net.node_count} nodes on a cycle, source at node 0 (supply 5)")
print(f"edge costs: {[e.cost for e in net.edges]}")
print()

mst_cost = evaluate_cost(net, fig2_mst_solution())
split_cost = evaluate_cost(net, fig2_optimal_solution())
print(f"MST-based orientation cost:   {mst_cost:5.1f}   (drops the cost-4 edge)")
print(f"flow-splitting configuration: {split_cost:5.1f}   (keeps it, halves the chain)")

oracle_sol, oracle_cost = brute_force_optimal(net)
print(f"oracle optimum over all {6} spanning trees: {oracle_cost}")

sol, report, stats = forward_solve(net)
print(f"constructed solution: cost {stats['cost']}, feasible={report.feasible()}")
print(f"gap vs oracle: {stats['cost'] - oracle_cost:+.3g}")
