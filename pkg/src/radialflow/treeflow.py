"""Exact flow solving on trees and polyforests.

On a tree with balanced values the flow distribution is unique (full column
rank of the incidence matrix), so pendant elimination recovers it in O(n+m):
repeatedly settle a degree-one node, direct its sole edge by the sign of its
value, and fold the value into the neighbor.
"""

from __future__ import annotations

import heapq
from collections import defaultdict

from .model import EPS, DistributionNetwork, RadialSolution


def _component_nodes(adjacency, start, seen):
    stack = [start]
    comp = []
    seen.add(start)
    while stack:
        v = stack.pop()
        comp.append(v)
        for e in adjacency[v]:
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return comp


def solve_tree_flow(
    network: DistributionNetwork,
    values: dict[int, float],
    pendant_key=None,
) -> RadialSolution | None:
    """Feasibility-checked unique flow on a tree network.

    Pendant nodes are processed in ascending node id (or by ``pendant_key``;
    the result is order-invariant). A pendant with zero value contributes no
    directed edge. Returns ``None`` when some pendant's accumulated value
    exceeds its sole edge's capacity, i.e. no feasible solution exists.
    """
    n = network.node_count
    m = len(network.edges)
    if m != n - 1:
        raise ValueError(f"not a tree: {n} nodes, {m} edges")
    seen: set[int] = set()
    if n > 0 and len(_component_nodes(network.adjacency, 0, seen)) != n:
        raise ValueError("not a tree: graph is disconnected")
    total = sum(values.get(i, 0.0) for i in range(n))
    if abs(total) > 1e-6:
        raise ValueError(f"values unbalanced: sum {total}")

    key = pendant_key or (lambda node: node)
    p = {i: float(values.get(i, 0.0)) for i in range(n)}
    incident: dict[int, set] = defaultdict(set)
    for e in network.edges:
        incident[e.a].add(e)
        incident[e.b].add(e)
    heap = [(key(i), i) for i in range(n) if len(incident[i]) == 1]
    heapq.heapify(heap)

    flows: dict[tuple[int, int], float] = {}
    while heap:
        _, i = heapq.heappop(heap)
        if len(incident[i]) != 1:
            continue
        (e,) = incident[i]
        j = e.other(i)
        if p[i] > EPS:
            if p[i] > e.capacity + EPS:
                return None
            flows[(i, j)] = p[i]
        elif p[i] < -EPS:
            if -p[i] > e.capacity + EPS:
                return None
            flows[(j, i)] = -p[i]
        p[j] += p[i]
        p[i] = 0.0
        incident[i].remove(e)
        incident[j].remove(e)
        if len(incident[j]) == 1:
            heapq.heappush(heap, (key(j), j))
    return RadialSolution(flows)


def signed_forest_flows(
    node_count: int,
    directed_edges,
    capacities: dict[tuple[int, int], float],
    values: dict[int, float],
) -> tuple[dict[tuple[int, int], float], dict[int, float], float]:
    """Signed unique flow on a polyforest, per connected component.

    ``directed_edges`` fixes each edge's reference orientation; the returned
    flow is negative where the unique solution runs against it. Components
    need not be balanced: leftover imbalance is reported per component root
    along with the total capacity violation, so callers can score infeasible
    working states. ``capacities`` is keyed by the directed pair.
    """
    incident: dict[int, set[tuple[int, int]]] = defaultdict(set)
    for pair in directed_edges:
        incident[pair[0]].add(pair)
        incident[pair[1]].add(pair)
    p = {i: float(values.get(i, 0.0)) for i in range(node_count)}
    degree = {i: len(incident[i]) for i in range(node_count)}
    queue = [i for i in sorted(incident) if degree[i] == 1]
    flows: dict[tuple[int, int], float] = {pair: 0.0 for pair in directed_edges}
    violation = 0.0
    idx = 0
    while idx < len(queue):
        i = queue[idx]
        idx += 1
        if degree[i] != 1:
            continue
        (pair,) = incident[i]
        a, b = pair
        j = b if i == a else a
        f = p[i] if i == a else -p[i]
        flows[pair] = f
        violation += max(0.0, abs(f) - capacities[pair])
        p[j] += p[i]
        p[i] = 0.0
        incident[i].remove(pair)
        incident[j].remove(pair)
        degree[i] -= 1
        degree[j] -= 1
        if degree[j] == 1:
            queue.append(j)
    residuals = {i: v for i, v in p.items() if abs(v) > EPS}
    return flows, residuals, violation


def flows_on_polyforest(
    network: DistributionNetwork,
    directed_edges,
    values: dict[int, float],
) -> RadialSolution:
    """Attach the unique flows to a given polyforest orientation.

    Every connected component of the polyforest must be balanced, and the
    unique flow must be nonnegative along every given direction; a materially
    negative flow signals that the orientation contradicts the unique
    solution. Zero flows are retained in the mapping.
    """
    pairs = list(directed_edges)
    undirected = set()
    for i, j in pairs:
        edge = network.edge_between(i, j)
        if edge is None:
            raise ValueError(f"edge ({i},{j}) absent from network")
        k = edge.key()
        if k in undirected:
            raise ValueError(f"edge ({i},{j}) appears twice")
        undirected.add(k)
    caps = {
        (i, j): network.edge_between(i, j).capacity for i, j in pairs
    }
    flows, residuals, _ = signed_forest_flows(
        network.node_count, pairs, caps, values
    )
    # residuals at nodes not touched by any edge are fine only if zero-valued
    bad = {i: v for i, v in residuals.items() if abs(v) > 1e-6}
    if bad:
        raise ValueError(f"unbalanced polyforest components: residuals {bad}")
    out: dict[tuple[int, int], float] = {}
    for pair, f in flows.items():
        if f < -1e-6:
            raise ValueError(
                f"orientation of edge {pair} contradicts the unique flow ({f})"
            )
        out[pair] = max(0.0, f)
    return RadialSolution(out)
