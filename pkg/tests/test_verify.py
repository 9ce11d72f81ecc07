"""Tests for the three-step feasibility verifier."""

import math
import time

import numpy as np
import pytest

from radialflow import fixtures
from radialflow.model import DistributionNetwork, Edge, RadialSolution
from radialflow.oracle import enumerate_spanning_trees, brute_force_optimal
from radialflow.treeflow import signed_forest_flows
from radialflow.verify import (
    check_capacity,
    check_conservation,
    check_radiality,
    verify_solution,
)


def fig8h_capacity_case():
    # seven edges of the repaired configuration, flows {10,10,10,10,0,0,0}
    return RadialSolution(
        {
            (0, 5): 10.0,
            (4, 2): 10.0,
            (3, 2): 10.0,
            (1, 4): 10.0,
            (0, 4): 0.0,
            (1, 5): 0.0,
            (1, 3): 0.0,
        }
    )


class TestCapacity:
    def test_fig8_final_configuration_respects_capacities(self):
        ok, violations = check_capacity(fixtures.fig8_network(), fig8h_capacity_case())
        assert ok and not violations

    def test_negative_flow_is_flagged(self):
        net = fixtures.fig2_network()
        ok, violations = check_capacity(net, RadialSolution({(0, 1): -1.0}))
        assert not ok
        assert violations[0][0] == (0, 1)

    def test_boundary_flow_equal_to_capacity_passes(self):
        net = DistributionNetwork(2, [Edge(0, 1, 5.0)], {0: 5.0}, {1: 5.0})
        ok, _ = check_capacity(net, RadialSolution({(0, 1): 5.0}))
        assert ok


class TestConservation:
    def test_fig5b_distribution_conserves(self):
        ok, residuals = check_conservation(
            fixtures.fig5_network(), fixtures.fig5_feasible_solution()
        )
        assert ok and not residuals

    def test_short_delivery_leaves_residual_at_v0(self):
        sol = fixtures.fig5_feasible_solution()
        sol.flows[(1, 2)] = 0.0  # v0 now receives only 1 of its demand 2
        ok, residuals = check_conservation(fixtures.fig5_network(), sol)
        assert not ok
        assert abs(residuals[2]) == pytest.approx(1.0)

    def test_empty_solution_on_zero_network(self):
        net = DistributionNetwork(3, [Edge(0, 1), Edge(1, 2)], {}, {})
        ok, residuals = check_conservation(net, RadialSolution())
        assert ok and not residuals


class TestRadiality:
    def test_ieee33_radial_orientation(self):
        net = fixtures.ieee33_network()
        sol = RadialSolution(
            {e: 0.0 for e in fixtures.ieee33_radial_orientation()}
        )
        assert check_radiality(net, sol)

    def test_directed_three_cycle_fails(self):
        net = DistributionNetwork(
            3, [Edge(0, 1), Edge(1, 2), Edge(0, 2)], {0: 2.0}, {1: 1.0, 2: 1.0}
        )
        sol = RadialSolution({(0, 1): 1.0, (1, 2): 1.0, (2, 0): 1.0})
        assert not check_radiality(net, sol)

    def test_fig5c_both_sources_everywhere_fails(self):
        assert not check_radiality(
            fixtures.fig5_network(), fixtures.fig5_nonradial_solution()
        )

    def test_agrees_with_union_find_on_random_solutions(self):
        rng = np.random.RandomState(11)
        net = DistributionNetwork(
            9,
            [Edge(a, b) for a in range(9) for b in range(a + 1, 9)],
            {0: 8.0},
            {i: 1.0 for i in range(1, 9)},
        )
        for _ in range(1000):
            m = int(rng.randint(1, 10))
            pairs = set()
            while len(pairs) < m:
                a, b = int(rng.randint(0, 9)), int(rng.randint(0, 9))
                if a != b:
                    pairs.add((min(a, b), max(a, b)))
            sol = RadialSolution({p: 1.0 for p in pairs})

            parent = list(range(9))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for a, b in pairs:
                ra, rb = find(a), find(b)
                if ra == rb:
                    acyclic = False
                    break
                parent[ra] = rb
            assert check_radiality(net, sol) == acyclic


class TestVerifySolution:
    def test_fig5b_feasible(self):
        report = verify_solution(
            fixtures.fig5_network(), fixtures.fig5_feasible_solution()
        )
        assert report.feasible()

    def test_fig5c_infeasible_with_radial_flag(self):
        report = verify_solution(
            fixtures.fig5_network(), fixtures.fig5_nonradial_solution()
        )
        assert not report.feasible()
        assert not report.radial_ok
        assert report.capacity_ok and report.conservation_ok

    def test_oracle_optimum_on_fig2_verifies(self):
        net = fixtures.fig2_network()
        sol, _ = brute_force_optimal(net)
        assert verify_solution(net, sol).feasible()

    def test_accepts_oracle_trees_and_rejects_reversals(self):
        # metamorphic: every feasible oracle orientation verifies; reversing
        # one nonzero-flow edge breaks conservation
        from radialflow.model import initial_values

        net = fixtures.fig2_network()
        values = initial_values(net)
        checked = 0
        for tree in enumerate_spanning_trees(net):
            pairs = [(net.edges[i].a, net.edges[i].b) for i in tree]
            caps = {p: net.edges[i].capacity for p, i in zip(pairs, tree)}
            flows, residuals, violation = signed_forest_flows(6, pairs, caps, values)
            if residuals or violation > 1e-9:
                continue
            oriented = {
                ((b, a) if f < 0 else (a, b)): abs(f)
                for (a, b), f in flows.items()
            }
            sol = RadialSolution(oriented)
            assert verify_solution(net, sol).feasible()
            checked += 1
            nonzero = [e for e, x in oriented.items() if x > 1e-9]
            i, j = nonzero[0]
            mutated = dict(oriented)
            mutated[(j, i)] = mutated.pop((i, j))
            assert not verify_solution(net, RadialSolution(mutated)).feasible()
        assert checked >= 1

    def test_runtime_scales_roughly_linearly(self):
        # coarse O(n+m) check: doubling the instance should not blow up
        def path_instance(n):
            net = DistributionNetwork(
                n,
                [Edge(i, i + 1, math.inf) for i in range(n - 1)],
                {0: float(n - 1)},
                {i: 1.0 for i in range(1, n)},
            )
            sol = RadialSolution(
                {(i, i + 1): float(n - 1 - i) for i in range(n - 1)}
            )
            return net, sol

        def best_time(n, repeats=5):
            net, sol = path_instance(n)
            best = math.inf
            for _ in range(repeats):
                t0 = time.perf_counter()
                verify_solution(net, sol)
                best = min(best, time.perf_counter() - t0)
            return best

        small = best_time(2000)
        large = best_time(4000)
        assert large / small < 4.0
