"""Shared instance generators for the test suite."""

import math

import numpy as np

from radialflow.model import DistributionNetwork, Edge


def random_instance(seed: int) -> DistributionNetwork:
    """Small random connected instance, mixed capacitated/uncapacitated.

    Deterministic per seed: 3..8 nodes, a random spanning tree plus a few
    chords, 1..n/2 sources with balanced random supplies, and a capacity
    regime rotating through uncapacitated / generous / tight / very tight.
    """
    rng = np.random.RandomState(seed)
    n = int(rng.randint(3, 9))
    edges = set()
    for v in range(1, n):
        edges.add((int(rng.randint(0, v)), v))
    max_extra = n * (n - 1) // 2 - (n - 1)
    for _ in range(int(rng.randint(0, min(4, max_extra) + 1))):
        a, b = int(rng.randint(0, n)), int(rng.randint(0, n))
        a, b = min(a, b), max(a, b)
        if a != b:
            edges.add((a, b))
    n_sources = int(rng.randint(1, max(2, n // 2) + 1))
    sources = sorted(int(x) for x in rng.choice(n, size=n_sources, replace=False))
    demand = {v: float(rng.randint(1, 6)) for v in range(n) if v not in sources}
    total = sum(demand.values())
    w = rng.uniform(0.5, 1.5, size=n_sources)
    w = w / w.sum() * total
    supply = {s: float(x) for s, x in zip(sources, w)}
    supply[sources[-1]] += total - sum(supply.values())
    slack = [math.inf, 2.0, 1.0, 0.6][seed % 4]
    es = []
    for a, b in sorted(edges):
        cap = (
            math.inf
            if math.isinf(slack)
            else float(total * slack * rng.uniform(0.3, 1.0))
        )
        es.append(Edge(a, b, cap, float(rng.uniform(0.5, 2.0))))
    return DistributionNetwork(n, es, supply, demand)


def split_core_instance(seed: int) -> DistributionNetwork:
    """Instance whose 2-core splits at a source articulation node.

    Two cycle blobs glued at node 0, which carries (most of) the supply, so
    node 0 is both a source and an articulation node of the 2-core. No
    pendants, so the 2-core is the whole graph.
    """
    rng = np.random.RandomState(seed)
    n_a = int(rng.randint(3, 6))
    n_b = int(rng.randint(3, 6))
    n = n_a + n_b - 1
    edges = set()
    for i in range(n_a):
        edges.add(tuple(sorted((i, (i + 1) % n_a))))
    ring_b = [0] + list(range(n_a, n_a + n_b - 1))
    for i in range(len(ring_b)):
        edges.add(tuple(sorted((ring_b[i], ring_b[(i + 1) % len(ring_b)]))))
    if n_a >= 4 and rng.random_sample() < 0.5:
        edges.add((1, 3))
    demand = {v: float(rng.randint(1, 5)) for v in range(1, n)}
    second = None
    if n_a >= 4 and rng.random_sample() < 0.4:
        second = 2
        demand.pop(second)
    total = sum(demand.values())
    supply = {0: total}
    if second is not None:
        s2 = float(rng.randint(1, 3))
        supply = {0: total - s2, second: s2}
    slack = [math.inf, 2.0, 1.0, 0.7][seed % 4]
    es = []
    for a, b in sorted(edges):
        cap = (
            math.inf
            if math.isinf(slack)
            else float(total * slack * rng.uniform(0.3, 1.0))
        )
        es.append(Edge(a, b, cap, float(rng.uniform(0.5, 2.0))))
    return DistributionNetwork(n, es, supply, demand)


def random_tree_instance(seed: int, n_max: int = 12) -> DistributionNetwork:
    """Random tree with balanced integer values and generous capacities."""
    rng = np.random.RandomState(seed)
    n = int(rng.randint(2, n_max + 1))
    edges = [(int(rng.randint(0, v)), v) for v in range(1, n)]
    n_sources = int(rng.randint(1, max(2, n // 3) + 1))
    sources = sorted(int(x) for x in rng.choice(n, size=n_sources, replace=False))
    demand = {v: float(rng.randint(1, 5)) for v in range(n) if v not in sources}
    total = sum(demand.values())
    w = rng.uniform(0.5, 1.5, size=n_sources)
    w = w / w.sum() * total
    supply = {s: float(x) for s, x in zip(sources, w)}
    supply[sources[-1]] += total - sum(supply.values())
    es = [Edge(a, b, math.inf, float(rng.uniform(0.5, 2.0))) for a, b in edges]
    return DistributionNetwork(n, es, supply, demand)
