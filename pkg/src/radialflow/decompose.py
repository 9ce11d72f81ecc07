"""Pre-processing (pendant peeling to the 2-core) and source-node partitioning.

Pendant subtrees have no routing alternatives, so their edges are directed by
value sign and folded inward until the 2-core remains. The 2-core is then
split at articulation nodes that are sources, replicating each articulation
node into every incident partition with adjusted values so each partition is
individually balanced. Partitions are independent units for the sampler.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

from .model import EPS, DistributionNetwork, Edge, InfeasibleError, initial_values


class Subgraph(NamedTuple):
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]


@dataclass
class Partition:
    index: int
    nodes: frozenset[int]
    edges: tuple[Edge, ...]
    values: dict[int, float]
    sources: tuple[int, ...]

    def capacity(self, i: int, j: int) -> float:
        e = self._edge_map.get((i, j) if i < j else (j, i))
        return e.capacity if e else 0.0

    def cost(self, i: int, j: int) -> float:
        e = self._edge_map.get((i, j) if i < j else (j, i))
        return e.cost if e else 0.0

    def edge(self, i: int, j: int) -> Edge | None:
        return self._edge_map.get((i, j) if i < j else (j, i))

    def __post_init__(self):
        self._edge_map = {e.key(): e for e in self.edges}
        self.adjacency: dict[int, list[int]] = {v: [] for v in self.nodes}
        for e in self.edges:
            self.adjacency[e.a].append(e.b)
            self.adjacency[e.b].append(e.a)
        for v in self.adjacency:
            self.adjacency[v].sort()


@dataclass
class PartitionSet:
    pre_sampled_edges: list[tuple[int, int]]
    two_core: Subgraph
    partitions: list[Partition]
    separation_adjustments: dict[tuple[int, int], float] = field(default_factory=dict)


def pre_process(
    network: DistributionNetwork,
    values: dict[int, float] | None = None,
    strict: bool = False,
) -> tuple[list[tuple[int, int]], Subgraph, dict[int, float], list[int]]:
    """Peel pendant nodes into directed pre-sampled edges; return the 2-core.

    Each pendant edge is directed by the sign of the pendant's current value
    (zero-valued pendants contribute no edge) and the value folds into the
    parent. Capacity is not checked unless ``strict`` is set, in which case a
    pendant value exceeding its sole edge's capacity raises
    :class:`InfeasibleError`.
    """
    p = dict(values) if values is not None else initial_values(network)
    incident: dict[int, set[Edge]] = defaultdict(set)
    for e in network.edges:
        incident[e.a].add(e)
        incident[e.b].add(e)
    heap = [v for v in range(network.node_count) if len(incident[v]) == 1]
    heapq.heapify(heap)

    sampled: list[tuple[int, int]] = []
    removed: set[int] = set()
    while heap:
        i = heapq.heappop(heap)
        if len(incident[i]) != 1:
            continue
        (e,) = incident[i]
        j = e.other(i)
        if strict and abs(p[i]) > e.capacity + EPS:
            raise InfeasibleError(
                f"pendant node {i} needs {abs(p[i])} through capacity {e.capacity}"
            )
        if p[i] > EPS:
            sampled.append((i, j))
        elif p[i] < -EPS:
            sampled.append((j, i))
        p[j] += p[i]
        p[i] = 0.0
        incident[i].remove(e)
        incident[j].remove(e)
        removed.add(i)
        if len(incident[j]) == 1:
            heapq.heappush(heap, j)

    core_nodes = tuple(
        v
        for v in range(network.node_count)
        if v not in removed and len(incident[v]) >= 2
    )
    core_set = set(core_nodes)
    core_edges = tuple(
        e for e in network.edges if e.a in core_set and e.b in core_set
    )
    core_values = {v: p[v] for v in core_nodes}
    sources = [v for v in core_nodes if p[v] > EPS]
    return sampled, Subgraph(core_nodes, core_edges), core_values, sources


def biconnected_components(nodes, adjacency) -> tuple[set[int], list[list[int]]]:
    """Articulation nodes and biconnected blocks via iterative DFS low-link.

    ``adjacency`` maps node -> list of ``(neighbor, edge_id)``. Blocks are
    returned as lists of edge ids.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    arts: set[int] = set()
    blocks: list[list[int]] = []
    timer = 0
    for root in sorted(nodes):
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        estack: list[int] = []
        stack: list = [(root, None, iter(adjacency[root]))]
        while stack:
            v, pedge, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == pedge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    estack.append(eid)
                    stack.append((w, eid, iter(adjacency[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append(eid)
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if low[v] >= disc[pv]:
                        # the subtree at v plus the tree edge pv-v closes a block
                        block = []
                        while estack:
                            top = estack.pop()
                            block.append(top)
                            if top == pedge:
                                break
                        if block:
                            blocks.append(block)
                        if pv != root:
                            arts.add(pv)
        if root_children > 1:
            arts.add(root)
    return arts, blocks


def articulation_points(nodes, adjacency) -> set[int]:
    """Articulation nodes of a graph given plain neighbor lists."""
    indexed = {
        v: [(w, (min(v, w), max(v, w))) for w in adjacency[v]] for v in adjacency
    }
    arts, _ = biconnected_components(nodes, indexed)
    return arts


def islander_partition(
    two_core: Subgraph,
    sources,
    values: dict[int, float],
    pre_sampled: list[tuple[int, int]] | None = None,
) -> PartitionSet:
    """Split the 2-core at source articulation nodes into balanced partitions.

    Only articulation nodes that are sources split the graph; each becomes a
    replica in every incident partition, with replica values computed by
    :func:`balance_separation_values` so every partition sums to zero.
    """
    pre = list(pre_sampled) if pre_sampled else []
    if not two_core.nodes:
        return PartitionSet(pre, two_core, [])

    adjacency: dict[int, list[tuple[int, int]]] = {v: [] for v in two_core.nodes}
    for idx, e in enumerate(two_core.edges):
        adjacency[e.a].append((e.b, idx))
        adjacency[e.b].append((e.a, idx))
    arts, blocks = biconnected_components(two_core.nodes, adjacency)
    split_nodes = arts & set(sources)

    # a partition is a union of biconnected blocks connected through
    # non-split nodes; blocks meeting only at split sources stay separate
    parent = list(range(len(blocks)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    blocks_at: dict[int, list[int]] = defaultdict(list)
    for b, idxs in enumerate(blocks):
        for idx in idxs:
            e = two_core.edges[idx]
            for node in (e.a, e.b):
                if b not in blocks_at[node]:
                    blocks_at[node].append(b)
    for node, bs in blocks_at.items():
        if node in split_nodes:
            continue
        for other in bs[1:]:
            ra, rb = find(bs[0]), find(other)
            if ra != rb:
                parent[ra] = rb

    groups: dict[int, list[int]] = defaultdict(list)
    for b, idxs in enumerate(blocks):
        groups[find(b)].extend(idxs)

    raw = []
    for idxs in groups.values():
        edges = tuple(two_core.edges[i] for i in idxs)
        nodes = frozenset(v for e in edges for v in (e.a, e.b))
        raw.append((min(nodes), nodes, edges))
    raw.sort(key=lambda t: t[0])

    partitions = [
        Partition(
            index=k,
            nodes=nodes,
            edges=edges,
            values={v: values[v] for v in nodes},
            sources=(),
        )
        for k, (_, nodes, edges) in enumerate(raw)
    ]
    pset = PartitionSet(pre, two_core, partitions)
    pset._split_nodes = split_nodes
    pset._original_values = dict(values)
    return balance_separation_values(pset)


def balance_separation_values(pset: PartitionSet) -> PartitionSet:
    """Resolve replica values at split nodes so every partition balances.

    Components with a single unresolved separation node are settled first and
    their net flow propagated through the separation node's budget; this
    terminates on the (tree-shaped) component/articulation incidence. If no
    single-separation component exists (an inconsistent quotient), remaining
    budgets are distributed proportionally to each partition's net deficit.
    """
    split_nodes: set[int] = getattr(pset, "_split_nodes", set())
    original: dict[int, float] = getattr(pset, "_original_values", {})
    if not split_nodes:
        for part in pset.partitions:
            part.sources = tuple(v for v in sorted(part.nodes) if part.values[v] > EPS)
        return pset

    internal_sum = {}
    pending: dict[int, set[int]] = {}
    for part in pset.partitions:
        reps = part.nodes & split_nodes
        pending[part.index] = set(reps)
        internal_sum[part.index] = sum(
            original[v] for v in part.nodes if v not in reps
        )
    budget = {a: original[a] for a in split_nodes}
    parts_of = defaultdict(set)
    for part in pset.partitions:
        for a in part.nodes & split_nodes:
            parts_of[a].add(part.index)

    resolved: dict[tuple[int, int], float] = {}

    def settle(k: int, a: int, value: float):
        resolved[(k, a)] = value
        pending[k].discard(a)
        parts_of[a].discard(k)
        internal_sum[k] += value
        budget[a] -= value

    while any(pending.values()):
        progress = False
        for part in pset.partitions:
            if len(pending[part.index]) == 1:
                (a,) = pending[part.index]
                settle(part.index, a, -internal_sum[part.index])
                progress = True
        if progress:
            continue
        for a in sorted(parts_of):
            if len(parts_of[a]) == 1:
                (k,) = parts_of[a]
                settle(k, a, budget[a])
                progress = True
        if progress:
            continue
        # no single-separation component: split budgets by net deficit
        a = min(a for a in sorted(parts_of) if parts_of[a])
        ks = sorted(parts_of[a])
        deficits = [max(0.0, -internal_sum[k]) for k in ks]
        total = sum(deficits)
        b = budget[a]
        for k, d in zip(ks, deficits):
            share = b * (d / total) if total > EPS else b / len(ks)
            settle(k, a, share)

    for part in pset.partitions:
        for a in part.nodes & split_nodes:
            part.values[a] = resolved[(part.index, a)]
        # an unbalanced partition here means the input itself was unbalanced
        # per component; leave it for the sampler/rewire to flag
        part.sources = tuple(v for v in sorted(part.nodes) if part.values[v] > EPS)
    pset.separation_adjustments = dict(resolved)
    return pset


def decompose(
    network: DistributionNetwork,
    values: dict[int, float] | None = None,
    strict: bool = False,
) -> PartitionSet:
    """Full decomposition: pendant peeling, then source-node partitioning."""
    sampled, core, core_values, sources = pre_process(network, values, strict)
    return islander_partition(core, sources, core_values, pre_sampled=sampled)


def partition_network(partition: Partition) -> tuple[DistributionNetwork, dict[int, int]]:
    """Stand-alone network for one partition (for oracle cross-checks).

    Returns the network plus the mapping from its dense node ids back to the
    original ids. Positive partition values become supplies, negative ones
    demands.
    """
    order = sorted(partition.nodes)
    index = {orig: local for local, orig in enumerate(order)}
    edges = [
        Edge(index[e.a], index[e.b], e.capacity, e.cost) for e in partition.edges
    ]
    supply = {index[v]: max(0.0, partition.values[v]) for v in order}
    demand = {index[v]: max(0.0, -partition.values[v]) for v in order}
    net = DistributionNetwork(len(order), edges, supply, demand)
    return net, {local: orig for orig, local in index.items()}
