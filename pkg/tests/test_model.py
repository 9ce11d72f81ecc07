"""Tests for the core data model: construction, invariants, cost."""

import math

import numpy as np
import pytest

from radialflow import fixtures
from radialflow.model import (
    DistributionNetwork,
    Edge,
    NetworkError,
    RadialSolution,
    build_network,
    evaluate_cost,
    initial_values,
)
from radialflow.netgen import network_record


def test_build_fig2_cycle():
    net = fixtures.fig2_network()
    assert net.node_count == 6
    assert len(net.edges) == 6
    assert net.sources() == [0]
    assert sum(net.supply) == pytest.approx(sum(net.demand))


def test_build_smallest_balanced_instance():
    raw = {
        "nodes": [
            {"id": 0, "supply": 1.0, "demand": 0.0},
            {"id": 1, "supply": 0.0, "demand": 1.0},
        ],
        "edges": [{"a": 0, "b": 1, "capacity": 2.0, "cost": 1.0}],
    }
    net = build_network(raw)
    assert net.node_count == 2
    assert net.edge_between(0, 1).capacity == 2.0


def test_build_rejects_unbalanced_totals():
    raw = {
        "nodes": [
            {"id": 0, "supply": 1.0, "demand": 0.0},
            {"id": 1, "supply": 0.0, "demand": 2.0},
        ],
        "edges": [{"a": 0, "b": 1}],
    }
    with pytest.raises(NetworkError, match="unbalanced totals"):
        build_network(raw)


def test_build_rejects_duplicate_edges_and_self_loops():
    with pytest.raises(NetworkError, match="duplicate edge"):
        DistributionNetwork(
            2, [Edge(0, 1), Edge(1, 0)], {0: 1.0}, {1: 1.0}
        )
    with pytest.raises(NetworkError, match="self-loop"):
        DistributionNetwork(2, [Edge(0, 0)], {0: 1.0}, {1: 1.0})


def test_build_rejects_negative_capacity_and_dual_role_nodes():
    with pytest.raises(NetworkError, match="negative capacity"):
        DistributionNetwork(2, [Edge(0, 1, -1.0)], {0: 1.0}, {1: 1.0})
    with pytest.raises(NetworkError, match="both source and sink"):
        DistributionNetwork(2, [Edge(0, 1)], {0: 1.0, 1: 1.0}, {1: 1.0, 0: 1.0})


def test_initial_values_sign_convention():
    net = fixtures.fig7_network()
    p = initial_values(net)
    assert p[4] == 20.0 and p[1] == -15.0
    assert sum(p.values()) == pytest.approx(0.0, abs=1e-9)


def test_evaluate_cost_fig2_configurations():
    net = fixtures.fig2_network()
    assert evaluate_cost(net, fixtures.fig2_mst_solution()) == pytest.approx(32.0)
    assert evaluate_cost(net, fixtures.fig2_optimal_solution()) == pytest.approx(22.0)


def test_evaluate_cost_empty_solution():
    assert evaluate_cost(fixtures.fig2_network(), RadialSolution()) == 0.0


def test_evaluate_cost_rejects_unknown_edge():
    with pytest.raises(NetworkError, match="absent"):
        evaluate_cost(fixtures.fig2_network(), RadialSolution({(0, 5): 1.0}))


def test_cost_invariant_under_node_relabeling():
    rng = np.random.RandomState(3)
    for _ in range(10):
        n = 8
        edges = [(int(rng.randint(0, v)), v) for v in range(1, n)]
        demand = {v: float(rng.randint(1, 4)) for v in range(1, n)}
        net = DistributionNetwork(
            n,
            [Edge(a, b, math.inf, float(rng.uniform(0.5, 2))) for a, b in edges],
            {0: sum(demand.values())},
            demand,
        )
        flows = {(a, b): float(rng.uniform(0, 3)) for a, b in edges}
        perm = [int(x) for x in rng.permutation(n)]
        net2 = DistributionNetwork(
            n,
            [
                Edge(perm[e.a], perm[e.b], e.capacity, e.cost)
                for e in net.edges
            ],
            {perm[0]: sum(demand.values())},
            {perm[v]: d for v, d in demand.items()},
        )
        flows2 = {(perm[a], perm[b]): x for (a, b), x in flows.items()}
        assert evaluate_cost(net, RadialSolution(flows)) == pytest.approx(
            evaluate_cost(net2, RadialSolution(flows2))
        )


def test_doubling_flows_quadruples_cost():
    net = fixtures.fig2_network()
    sol = fixtures.fig2_optimal_solution()
    doubled = RadialSolution({e: 2 * x for e, x in sol.flows.items()})
    assert evaluate_cost(net, doubled) == pytest.approx(4 * evaluate_cost(net, sol))


def test_round_trip_through_record():
    for name in ("fig2", "fig5", "fig8"):
        net = fixtures.builtin_network(name)
        assert build_network(network_record(net)) == net
