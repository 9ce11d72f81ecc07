"""Exact desk-scale ground truth by spanning-tree enumeration.

Every feasible radial configuration can be augmented with zero-flow edges to
an underlying undirected spanning tree, and each spanning tree induces a
unique flow, so enumerating spanning trees and capacity-checking the unique
flow of each finds the exact optimum (or certifies infeasibility). Intended
for small instances; guarded by ``max_n``.
"""

from __future__ import annotations

import math

from .model import DistributionNetwork, Edge, RadialSolution, initial_values
from .treeflow import signed_forest_flows

SIZE_GUARD = 12
_COST_TOL = 1e-9


def _components(network: DistributionNetwork) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for start in range(network.node_count):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for e in network.adjacency[v]:
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def _connected_with(adjacency, nodes: list[int], allowed: set[int]) -> bool:
    # connectivity of `nodes` using only edge indices in `allowed`
    start = nodes[0]
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for idx, e in adjacency[v]:
            if idx not in allowed:
                continue
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


def enumerate_spanning_trees(network: DistributionNetwork, max_n: int = SIZE_GUARD):
    """Yield every spanning tree of a connected network exactly once.

    Trees are emitted as sorted tuples of edge indices into
    ``network.edges``. Backtracks over include/exclude decisions per edge,
    pruning exclude-branches that would disconnect the remaining graph.
    """
    n = network.node_count
    if n > max_n:
        raise ValueError(f"size guard: {n} nodes exceeds max_n={max_n}")
    comps = _components(network)
    if len(comps) != 1:
        raise ValueError("network is disconnected")
    if n == 1:
        yield ()
        return

    edges = network.edges
    m = len(edges)
    adjacency = [[] for _ in range(n)]
    for idx, e in enumerate(edges):
        adjacency[e.a].append((idx, e))
        adjacency[e.b].append((idx, e))
    nodes = list(range(n))

    def find(parent, x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(idx, parent, chosen, available):
        if len(chosen) == n - 1:
            yield tuple(chosen)
            return
        if idx == m:
            return
        e = edges[idx]
        ra, rb = find(parent, e.a), find(parent, e.b)
        if ra == rb:
            available.discard(idx)
            yield from rec(idx + 1, parent, chosen, available)
            available.add(idx)
            return
        # include
        p2 = list(parent)
        p2[ra] = rb
        chosen.append(idx)
        yield from rec(idx + 1, p2, chosen, available)
        chosen.pop()
        # exclude, only if the rest can still span
        available.discard(idx)
        if _connected_with(adjacency, nodes, available | set(chosen)):
            yield from rec(idx + 1, parent, chosen, available)
        available.add(idx)

    yield from rec(0, list(range(n)), [], set(range(m)))


def count_spanning_trees(network: DistributionNetwork) -> int:
    """Number of spanning trees via the Matrix-Tree theorem.

    Computes the determinant of the (N-1)x(N-1) principal cofactor of the
    graph Laplacian in exact integer arithmetic (fraction-free Gaussian
    elimination). Returns 0 for a disconnected network.
    """
    n = network.node_count
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for e in network.edges:
        lap[e.a][e.a] += 1
        lap[e.b][e.b] += 1
        lap[e.a][e.b] -= 1
        lap[e.b][e.a] -= 1
    a = [row[1:] for row in lap[1:]]
    size = n - 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[size - 1][size - 1]


def _tree_solution(network, tree_idxs, values):
    pairs = [(network.edges[i].a, network.edges[i].b) for i in tree_idxs]
    caps = {p: network.edges[i].capacity for p, i in zip(pairs, tree_idxs)}
    flows, residuals, _ = signed_forest_flows(
        network.node_count, pairs, caps, values
    )
    if any(abs(v) > 1e-6 for v in residuals.values()):
        return None
    oriented: dict[tuple[int, int], float] = {}
    cost = 0.0
    for (a, b), f in flows.items():
        cap = caps[(a, b)]
        if abs(f) > cap + _COST_TOL:
            return None
        edge = network.edge_between(a, b)
        if f < 0:
            oriented[(b, a)] = -f
        else:
            oriented[(a, b)] = f
        cost += edge.cost * f * f
    return oriented, cost


def brute_force_optimal(
    network: DistributionNetwork, max_n: int = SIZE_GUARD
) -> tuple[RadialSolution | None, float]:
    """Exact optimum over all radial configurations, or infeasible verdict.

    Works per connected component (each must balance internally). Returns
    ``(None, inf)`` when no spanning tree of some component admits a
    capacity-respecting flow. Ties are broken by the lexicographically
    smallest directed edge set.
    """
    values = initial_values(network)
    total_cost = 0.0
    combined: dict[tuple[int, int], float] = {}
    for comp in _components(network):
        if abs(sum(values[v] for v in comp)) > 1e-6:
            return None, math.inf
        if len(comp) == 1:
            continue
        if len(comp) > max_n:
            raise ValueError(f"size guard: component of {len(comp)} nodes")
        sub = _component_network(network, comp)
        remap = {local: orig for local, orig in enumerate(comp)}
        sub_values = {i: values[remap[i]] for i in range(len(comp))}
        best = None
        for tree in enumerate_spanning_trees(sub, max_n=max_n):
            result = _tree_solution(sub, tree, sub_values)
            if result is None:
                continue
            oriented, cost = result
            key = tuple(sorted(oriented))
            if (
                best is None
                or cost < best[1] - _COST_TOL
                or (abs(cost - best[1]) <= _COST_TOL and key < best[2])
            ):
                best = (oriented, cost, key)
        if best is None:
            return None, math.inf
        for (a, b), f in best[0].items():
            combined[(remap[a], remap[b])] = f
        total_cost += best[1]
    return RadialSolution(combined), total_cost


def brute_force_feasible(network: DistributionNetwork, max_n: int = SIZE_GUARD) -> bool:
    """Feasibility-only variant: stops at the first feasible spanning tree."""
    values = initial_values(network)
    for comp in _components(network):
        if abs(sum(values[v] for v in comp)) > 1e-6:
            return False
        if len(comp) == 1:
            continue
        if len(comp) > max_n:
            raise ValueError(f"size guard: component of {len(comp)} nodes")
        sub = _component_network(network, comp)
        sub_values = {i: values[comp[i]] for i in range(len(comp))}
        if not any(
            _tree_solution(sub, tree, sub_values) is not None
            for tree in enumerate_spanning_trees(sub, max_n=max_n)
        ):
            return False
    return True


def _component_network(network: DistributionNetwork, comp: list[int]):
    index = {orig: local for local, orig in enumerate(comp)}
    in_comp = set(comp)
    edges = [
        Edge(index[e.a], index[e.b], e.capacity, e.cost)
        for e in network.edges
        if e.a in in_comp and e.b in in_comp
    ]
    supply = {index[v]: network.supply[v] for v in comp}
    demand = {index[v]: network.demand[v] for v in comp}
    return DistributionNetwork(len(comp), edges, supply, demand)


def has_equal_partition(items) -> bool:
    """Exhaustive Partition-Problem verdict for a multiset of integers."""
    total = sum(items)
    if total % 2:
        return False
    target = total // 2
    reachable = {0}
    for a in items:
        reachable |= {r + a for r in reachable}
    return target in reachable


def partition_reduction_instance(a_values, a0: int = 2) -> DistributionNetwork:
    """Hardness-reduction network: feasibility equals the Partition verdict.

    Two sources plus sinks ``v0..vn``: both sources connect to every sink,
    ``v0``'s two edges have capacity ``a0/2`` forcing it to draw from both,
    so every other sink must be served by exactly one source and feasibility
    becomes a Partition instance on ``a_values``. Supplies are
    ``sum(a)/2 + a0/2`` each so totals balance.
    """
    a_values = list(a_values)
    if not a_values:
        raise ValueError("need at least one partition item")
    if any(a <= 0 for a in a_values):
        raise ValueError("partition items must be positive")
    if a0 <= 0 or a0 % 2:
        raise ValueError("a0 must be a positive even integer")
    n = len(a_values)
    s1, s2, v0 = 0, 1, 2
    supply_each = sum(a_values) / 2 + a0 / 2
    edges = [Edge(s1, v0, a0 / 2, 1.0), Edge(s2, v0, a0 / 2, 1.0)]
    demand = {v0: float(a0)}
    for i, a in enumerate(a_values):
        vi = 3 + i
        edges.append(Edge(s1, vi, float(a), 1.0))
        edges.append(Edge(s2, vi, float(a), 1.0))
        demand[vi] = float(a)
    return DistributionNetwork(
        node_count=n + 3,
        edges=edges,
        supply={s1: supply_each, s2: supply_each},
        demand=demand,
        name=f"partition-reduction-{a_values}-a0={a0}",
    )
