"""Core data model for capacitated multi-source distribution networks.

A network is an undirected simple graph with per-edge capacity and quadratic
cost coefficient, plus per-node supply/demand. Nodes are dense integers
0..N-1 internally; external files may carry arbitrary labels which are mapped
at load time (see :mod:`radialflow.netgen`).

Nodal values ("current nodal values") are plain ``dict[int, float]`` mappings,
initialized to ``supply - demand`` and mutated by the solver as sampling
progresses. Candidate solutions are :class:`RadialSolution`: a set of directed
edges whose undirected version is a subset of the network's edges, with a
nonnegative flow per directed edge.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

EPS = 1e-9


class NetworkError(ValueError):
    """Raised when a network description violates the model invariants."""


class SchemaError(NetworkError):
    """Raised when a network/solution file does not match the schema."""


class InfeasibleError(RuntimeError):
    """Raised when an operation proves the instance infeasible in strict mode."""


@dataclass(frozen=True)
class Edge:
    """Undirected edge with capacity (flow units) and cost per squared flow."""

    a: int
    b: int
    capacity: float = math.inf
    cost: float = 1.0

    def key(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a


class DistributionNetwork:
    """Immutable capacitated network with supplies and demands.

    Invariants enforced at construction:

    * no self loops, at most one edge per unordered node pair;
    * capacities and costs finite-or-inf, nonnegative;
    * per node at most one of supply/demand strictly positive;
    * total supply equals total demand within ``EPS``.
    """

    def __init__(
        self,
        node_count: int,
        edges: list[Edge],
        supply: dict[int, float],
        demand: dict[int, float],
        node_labels: list[str] | None = None,
        name: str = "",
        seed: int | None = None,
    ):
        if node_count <= 0:
            raise NetworkError("node_count must be positive")
        self.node_count = node_count
        self.supply = [0.0] * node_count
        self.demand = [0.0] * node_count
        for i, g in supply.items():
            self._check_node(i)
            if g < 0 or not math.isfinite(g):
                raise NetworkError(f"negative or non-finite supply at node {i}")
            self.supply[i] = float(g)
        for i, d in demand.items():
            self._check_node(i)
            if d < 0 or not math.isfinite(d):
                raise NetworkError(f"negative or non-finite demand at node {i}")
            self.demand[i] = float(d)
        for i in range(node_count):
            if self.supply[i] > EPS and self.demand[i] > EPS:
                raise NetworkError(f"node {i} is both source and sink")
        total_in = sum(self.supply)
        total_out = sum(self.demand)
        if abs(total_in - total_out) > EPS:
            raise NetworkError(
                f"unbalanced totals: supply {total_in} vs demand {total_out}"
            )

        self.edges: list[Edge] = []
        self._by_pair: dict[tuple[int, int], Edge] = {}
        for e in edges:
            self._check_node(e.a)
            self._check_node(e.b)
            if e.a == e.b:
                raise NetworkError(f"self-loop at node {e.a}")
            if e.capacity < 0 or math.isnan(e.capacity):
                raise NetworkError(f"negative capacity on edge ({e.a},{e.b})")
            if e.cost < 0 or not math.isfinite(e.cost):
                raise NetworkError(f"negative or non-finite cost on edge ({e.a},{e.b})")
            if e.key() in self._by_pair:
                raise NetworkError(f"duplicate edge ({e.a},{e.b})")
            self._by_pair[e.key()] = e
            self.edges.append(e)

        self.node_labels = list(node_labels) if node_labels else None
        if self.node_labels is not None and len(self.node_labels) != node_count:
            raise NetworkError("node_labels length mismatch")
        self.name = name
        self.seed = seed

        self.adjacency: list[list[Edge]] = [[] for _ in range(node_count)]
        for e in self.edges:
            self.adjacency[e.a].append(e)
            self.adjacency[e.b].append(e)

    def _check_node(self, i: int) -> None:
        if not isinstance(i, numbers.Integral) or i < 0 or i >= self.node_count:
            raise NetworkError(f"node id {i} out of range 0..{self.node_count - 1}")

    def edge_between(self, i: int, j: int) -> Edge | None:
        return self._by_pair.get((i, j) if i < j else (j, i))

    def sources(self) -> list[int]:
        return [i for i in range(self.node_count) if self.supply[i] > EPS]

    def sinks(self) -> list[int]:
        return [i for i in range(self.node_count) if self.demand[i] > EPS]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistributionNetwork):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edges == other.edges
            and self.supply == other.supply
            and self.demand == other.demand
            and self.node_labels == other.node_labels
            and self.name == other.name
            and self.seed == other.seed
        )

    def __repr__(self) -> str:
        return (
            f"DistributionNetwork(n={self.node_count}, m={len(self.edges)}, "
            f"sources={len(self.sources())}, name={self.name!r})"
        )


def build_network(raw: dict) -> DistributionNetwork:
    """Build a validated network from a plain description record.

    ``raw`` carries ``nodes`` (list of ``{id, supply, demand}``) and ``edges``
    (list of ``{a, b, capacity, cost}``). Node ids may be arbitrary labels;
    they are mapped to dense integers in order of appearance. ``capacity``
    accepts the literal token ``"inf"`` for uncapacitated edges.
    """
    if not isinstance(raw, dict):
        raise SchemaError("network description must be a mapping")
    for field_name in ("nodes", "edges"):
        if field_name not in raw:
            raise SchemaError(f"missing field: {field_name}")

    labels: list = []
    index: dict = {}
    supply: dict[int, float] = {}
    demand: dict[int, float] = {}
    for rec in raw["nodes"]:
        if "id" not in rec:
            raise SchemaError("node record missing field: id")
        label = rec["id"]
        if label in index:
            raise SchemaError(f"duplicate node id {label!r}")
        index[label] = len(labels)
        labels.append(label)
        i = index[label]
        supply[i] = float(rec.get("supply", 0.0))
        demand[i] = float(rec.get("demand", 0.0))

    def _cap(value) -> float:
        if value is None or value == "inf":
            return math.inf
        return float(value)

    edges = []
    for rec in raw["edges"]:
        for f in ("a", "b"):
            if f not in rec:
                raise SchemaError(f"edge record missing field: {f}")
        for f in ("a", "b"):
            if rec[f] not in index:
                raise SchemaError(f"edge endpoint {rec[f]!r} is not a declared node")
        edges.append(
            Edge(
                a=index[rec["a"]],
                b=index[rec["b"]],
                capacity=_cap(rec.get("capacity", "inf")),
                cost=float(rec.get("cost", 1.0)),
            )
        )

    meta = raw.get("meta", {})
    plain = all(label == i for i, label in enumerate(labels))
    return DistributionNetwork(
        node_count=len(labels),
        edges=edges,
        supply=supply,
        demand=demand,
        node_labels=None if plain else [str(x) for x in labels],
        name=str(meta.get("name", "")),
        seed=meta.get("seed"),
    )


def initial_values(network: DistributionNetwork) -> dict[int, float]:
    """Initial nodal values: +supply at sources, -demand at sinks."""
    return {
        i: network.supply[i] - network.demand[i] for i in range(network.node_count)
    }


@dataclass
class RadialSolution:
    """Directed polyforest with per-edge nonnegative flows.

    ``flows`` maps each directed edge ``(i, j)`` to its flow; zero flows are
    retained so cost and verification operate on a total mapping.
    """

    flows: dict[tuple[int, int], float] = field(default_factory=dict)

    @property
    def directed_edges(self) -> set[tuple[int, int]]:
        return set(self.flows)

    def undirected_pairs(self) -> set[tuple[int, int]]:
        return {(i, j) if i < j else (j, i) for i, j in self.flows}

    def __len__(self) -> int:
        return len(self.flows)


def evaluate_cost(network: DistributionNetwork, sol: RadialSolution) -> float:
    """Quadratic distribution cost: sum of cost_coeff * flow^2 over edges."""
    total = 0.0
    for (i, j), x in sol.flows.items():
        edge = network.edge_between(i, j)
        if edge is None:
            raise NetworkError(f"solution edge ({i},{j}) absent from network")
        total += edge.cost * x * x
    return total
