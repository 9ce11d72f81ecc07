"""Instance generation (Watts-Strogatz + balanced values) and file I/O.

The file format is a single JSON document with fixed field order so saved
networks are byte-stable and diffable:

    {"meta": {"name": ..., "seed": ...},
     "nodes": [{"id": ..., "supply": ..., "demand": ...}, ...],
     "edges": [{"a": ..., "b": ..., "capacity": ..., "cost": ...}, ...]}

Infinite capacity is encoded as the literal token ``"inf"``. Node ids may be
arbitrary labels; they are mapped to dense integers in order of appearance.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .model import (
    DistributionNetwork,
    Edge,
    RadialSolution,
    SchemaError,
    build_network,
)
from .verify import VerificationReport


class UndirectedGraph(NamedTuple):
    node_count: int
    edges: tuple[tuple[int, int], ...]


def _is_connected(n: int, edges) -> bool:
    if n == 0:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def watts_strogatz(
    n: int, k: int, beta: float, seed: int = 0, max_retries: int = 50
) -> UndirectedGraph:
    """Connected Watts-Strogatz ring-lattice rewiring, deterministic per seed.

    Each node starts joined to its k nearest ring neighbors; every lattice
    edge is rewired with probability ``beta`` (far endpoint replaced by a
    uniform non-duplicate target). Rewiring moves edges, never adds or
    removes, so the edge count is exactly ``n*k/2``. Disconnected draws are
    regenerated with an incremented seed, up to ``max_retries``.
    """
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be an even integer >= 2")
    if n <= k:
        raise ValueError("need n > k")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")

    for attempt in range(max_retries):
        rng = np.random.RandomState(seed + attempt)
        present = set()
        edge_list = []
        for i in range(n):
            for off in range(1, k // 2 + 1):
                pair = (i, (i + off) % n)
                pair = (min(pair), max(pair))
                present.add(pair)
                edge_list.append(pair)
        for idx, (a, b) in enumerate(edge_list):
            if beta > 0 and rng.random_sample() < beta:
                for _ in range(n):
                    c = int(rng.randint(0, n))
                    cand = (min(a, c), max(a, c))
                    if c != a and cand not in present:
                        present.discard((a, b) if a < b else (b, a))
                        present.add(cand)
                        edge_list[idx] = cand
                        break
        if _is_connected(n, edge_list):
            return UndirectedGraph(n, tuple(edge_list))
    raise RuntimeError(f"no connected graph after {max_retries} retries")


def assign_balanced_values(
    graph: UndirectedGraph,
    n_sources,
    demand_range: tuple[float, float] = (1.0, 5.0),
    slack: float = math.inf,
    seed: int = 0,
    cost_range: tuple[float, float] = (0.5, 2.0),
) -> DistributionNetwork:
    """Attach balanced random supplies/demands and capacities to a topology.

    ``n_sources`` is either a source count (nodes drawn at random) or an
    explicit sequence of source node ids. Sink demands are uniform in
    ``demand_range``; supplies are split randomly across the sources and
    corrected so totals balance exactly. Capacities are ``slack`` times the
    total demand (a bound no single edge can exceed), with ``slack=inf``
    meaning uncapacitated. Deterministic per seed.
    """
    rng = np.random.RandomState(seed)
    n = graph.node_count
    if isinstance(n_sources, int):
        if not 0 < n_sources < n:
            raise ValueError("need 0 < n_sources < node count")
        sources = sorted(int(v) for v in rng.choice(n, size=n_sources, replace=False))
    else:
        sources = sorted(int(v) for v in n_sources)
    source_set = set(sources)

    lo, hi = demand_range
    demand = {
        i: float(rng.uniform(lo, hi)) for i in range(n) if i not in source_set
    }
    total = sum(demand.values())
    weights = rng.uniform(0.5, 1.5, size=len(sources))
    shares = weights / weights.sum() * total
    supply = {s: float(x) for s, x in zip(sources, shares)}
    supply[sources[-1]] += total - sum(supply.values())  # exact balance

    cap = math.inf if math.isinf(slack) else slack * total
    edges = [
        Edge(a, b, cap, float(rng.uniform(*cost_range))) for a, b in graph.edges
    ]
    return DistributionNetwork(
        node_count=n,
        edges=edges,
        supply=supply,
        demand=demand,
        name=f"ws-n{n}",
        seed=seed,
    )


def _cap_token(c: float):
    return "inf" if math.isinf(c) else c


def network_record(network: DistributionNetwork) -> dict:
    """Plain serializable record for a network, fixed field order."""
    labels = network.node_labels or list(range(network.node_count))
    nodes = [
        {"id": labels[i], "supply": network.supply[i], "demand": network.demand[i]}
        for i in range(network.node_count)
    ]
    edges = [
        {
            "a": labels[e.a],
            "b": labels[e.b],
            "capacity": _cap_token(e.capacity),
            "cost": e.cost,
        }
        for e in network.edges
    ]
    meta = {"name": network.name, "seed": network.seed}
    return {"meta": meta, "nodes": nodes, "edges": edges}


def save_network(network: DistributionNetwork, path) -> None:
    Path(path).write_text(json.dumps(network_record(network), indent=2) + "\n")


def load_network(path) -> DistributionNetwork:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return build_network(raw)


def save_solution(
    sol: RadialSolution,
    report: VerificationReport,
    path,
    network: DistributionNetwork | None = None,
    cost: float | None = None,
    stats: dict | None = None,
) -> None:
    """Write a solution file; embeds the network so verification is self-contained."""
    labels = (
        (network.node_labels or list(range(network.node_count)))
        if network is not None
        else None
    )

    def name(i):
        return labels[i] if labels is not None else i

    record = {
        "cost": cost,
        "feasible": report.feasible(),
        "report": {
            "capacity_ok": report.capacity_ok,
            "conservation_ok": report.conservation_ok,
            "radial_ok": report.radial_ok,
            "max_capacity_violation": report.max_capacity_violation,
            "max_conservation_residual": report.max_conservation_residual,
        },
        "edges": [
            {"from": name(i), "to": name(j), "flow": x}
            for (i, j), x in sorted(sol.flows.items())
        ],
    }
    if stats:
        record["stats"] = stats
    if network is not None:
        record["network"] = network_record(network)
    Path(path).write_text(json.dumps(record, indent=2) + "\n")


def load_solution(path) -> tuple[RadialSolution, DistributionNetwork | None, dict]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if "edges" not in raw:
        raise SchemaError("missing field: edges")
    network = build_network(raw["network"]) if "network" in raw else None
    if network is not None and network.node_labels is not None:
        index = {label: i for i, label in enumerate(network.node_labels)}
    else:
        index = None

    def resolve(x):
        if index is not None:
            return index[str(x)]
        return int(x)

    flows = {}
    for rec in raw["edges"]:
        for f in ("from", "to", "flow"):
            if f not in rec:
                raise SchemaError(f"solution edge missing field: {f}")
        flows[(resolve(rec["from"]), resolve(rec["to"]))] = float(rec["flow"])
    return RadialSolution(flows), network, raw
