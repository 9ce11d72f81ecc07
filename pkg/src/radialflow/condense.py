"""Polytree maintenance and dual-graph condensation for one partition.

The growing radial configuration is a set of rooted polytrees, one per
source initially, merged as edges are sampled. For edge selection the
partition is condensed into a quasi-bipartite dual graph: each polytree
becomes a "sampled" super node and each connected component of the
still-unsampled subgraph becomes an "un-sampled" super node; dual edges are
the original edges crossing super-node boundaries, annotated with their
member endpoints.

The working state also tracks per-edge flows so residual capacities gate
both value transfers and candidate classification. Sampling an edge
``i -> j`` moves supply across it: the transferable amount is the minimum of
the supply collectible at ``i`` inside its tree (through residual
capacities), the edge's capacity, and the receiving side's total deficit.
Whatever arrives at ``j`` is absorbed by reachable deficits; the rest is
stranded at ``j`` as surplus for the repair phase to relocate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import EPS
from .decompose import Partition


class Polytree:
    def __init__(self, nodes, edges=(), roots=()):
        self.nodes: set[int] = set(nodes)
        self.edges: set[tuple[int, int]] = set(edges)
        self.roots: set[int] = set(roots)

    def aggregate(self, values: dict[int, float]) -> float:
        return sum(values.get(v, 0.0) for v in self.nodes)


class PolytreeSet:
    """Disjoint rooted polytrees with merge-on-sample support."""

    def __init__(self):
        self.trees: dict[int, Polytree] = {}
        self.owner: dict[int, int] = {}

    @classmethod
    def from_sources(cls, sources) -> "PolytreeSet":
        ts = cls()
        for s in sorted(sources):
            ts.trees[s] = Polytree([s], roots=[s])
            ts.owner[s] = s
        return ts

    def tree_of(self, node: int) -> int | None:
        return self.owner.get(node)

    def add_edge(self, i: int, j: int) -> int:
        """Append ``i -> j``; attaches ``j`` or merges two trees. Returns tree id."""
        ti = self.owner.get(i)
        if ti is None:
            raise ValueError(f"node {i} belongs to no polytree")
        tj = self.owner.get(j)
        if tj == ti:
            raise ValueError(f"edge ({i},{j}) would close a cycle in tree {ti}")
        tree = self.trees[ti]
        tree.edges.add((i, j))
        if tj is None:
            tree.nodes.add(j)
            self.owner[j] = ti
        else:
            other = self.trees.pop(tj)
            tree.nodes |= other.nodes
            tree.edges |= other.edges
            tree.roots |= other.roots
            for v in other.nodes:
                self.owner[v] = ti
        return ti


def tree_update(trees: PolytreeSet, new_edge: tuple[int, int]) -> PolytreeSet:
    """Spec-level wrapper: mutate ``trees`` with one sampled edge."""
    trees.add_edge(*new_edge)
    return trees


def connected_components(nodes, edges) -> list[list[int]]:
    """DFS component labeling; components ordered by smallest member id."""
    node_list = sorted(nodes)
    adj: dict[int, list[int]] = {v: [] for v in node_list}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for start in node_list:
        if start in seen:
            continue
        seen.add(start)
        stack = [start]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class SuperNode:
    sid: int
    kind: str  # "sampled" | "unsampled"
    members: tuple[int, ...]
    collective_value: float  # 0 for sampled super nodes by convention
    supply_value: float  # tree aggregate for sampled; == collective otherwise


@dataclass(frozen=True)
class DualEdge:
    u: int
    v: int
    s: int
    t: int


@dataclass
class DualGraph:
    supers: dict[int, SuperNode]
    edges: list[DualEdge]
    super_of: dict[int, int]

    def unsampled(self) -> list[SuperNode]:
        return [s for s in self.supers.values() if s.kind == "unsampled"]


def build_dual(partition: Partition, trees: PolytreeSet, values) -> DualGraph:
    supers: dict[int, SuperNode] = {}
    super_of: dict[int, int] = {}
    sid = 0
    for _, tree in sorted(trees.trees.items(), key=lambda kv: min(kv[1].nodes)):
        members = tuple(sorted(tree.nodes))
        agg = sum(values.get(v, 0.0) for v in members)
        supers[sid] = SuperNode(sid, "sampled", members, 0.0, agg)
        for v in members:
            super_of[v] = sid
        sid += 1
    unsampled_nodes = [v for v in partition.nodes if v not in trees.owner]
    in_unsampled = set(unsampled_nodes)
    inner_edges = [
        (e.a, e.b)
        for e in partition.edges
        if e.a in in_unsampled and e.b in in_unsampled
    ]
    for comp in connected_components(unsampled_nodes, inner_edges):
        members = tuple(comp)
        total = sum(values.get(v, 0.0) for v in members)
        supers[sid] = SuperNode(sid, "unsampled", members, total, total)
        for v in members:
            super_of[v] = sid
        sid += 1

    dual_edges = []
    for e in partition.edges:
        su, sv = super_of[e.a], super_of[e.b]
        if su == sv:
            continue
        a, b = e.a, e.b
        if supers[su].kind == "unsampled" and supers[sv].kind == "sampled":
            su, sv, a, b = sv, su, b, a
        elif supers[su].kind == supers[sv].kind and su > sv:
            su, sv, a, b = sv, su, b, a
        dual_edges.append(DualEdge(su, sv, a, b))
    dual_edges.sort(key=lambda d: (d.u, d.v, d.s, d.t))
    return DualGraph(supers, dual_edges, super_of)


class PartitionState:
    """Mutable sampling state for one partition: values, flows, polytrees."""

    def __init__(self, partition: Partition, trees: PolytreeSet | None = None,
                 values: dict[int, float] | None = None):
        self.partition = partition
        self.p: dict[int, float] = dict(values if values is not None else partition.values)
        self.trees = trees if trees is not None else PolytreeSet.from_sources(partition.sources)
        self.flows: dict[tuple[int, int], float] = {}
        self.order: list[tuple[int, int]] = []
        self.tree_adj: dict[int, list[tuple[int, tuple[int, int]]]] = {
            v: [] for v in partition.nodes
        }
        for tree in self.trees.trees.values():
            for (a, b) in tree.edges:
                self.flows.setdefault((a, b), 0.0)
                self._link(a, b)

    def _link(self, a: int, b: int) -> None:
        self.tree_adj[a].append((b, (a, b)))
        self.tree_adj[b].append((a, (a, b)))
        self.tree_adj[a].sort()
        self.tree_adj[b].sort()

    def residual_toward(self, pair: tuple[int, int], node: int) -> float:
        # capacity left for flow moving toward `node` along a sampled edge
        f = self.flows[pair]
        cap = self.partition.capacity(*pair)
        return cap - f if node == pair[1] else f

    def _push_toward(self, pair: tuple[int, int], node: int, amount: float) -> None:
        if node == pair[1]:
            self.flows[pair] += amount
        else:
            self.flows[pair] -= amount

    def collect(self, node: int, need: float, banned=None) -> float:
        """Pull up to ``need`` units of surplus to ``node`` through residuals."""
        if need <= EPS:
            return 0.0
        got = min(max(self.p[node], 0.0), need)
        if got > 0.0:
            self.p[node] -= got
        for nbr, pair in self.tree_adj[node]:
            if got >= need - EPS:
                break
            if pair == banned:
                continue
            r = self.residual_toward(pair, node)
            if r <= EPS:
                continue
            sub = self.collect(nbr, min(need - got, r), banned=pair)
            if sub > 0.0:
                self._push_toward(pair, node, sub)
                got += sub
        return got

    def avail_at(self, node: int, banned=None) -> float:
        """Supply collectible at ``node`` without mutating the state."""
        total = max(self.p[node], 0.0)
        for nbr, pair in self.tree_adj[node]:
            if pair == banned:
                continue
            r = self.residual_toward(pair, node)
            if r <= EPS:
                continue
            total += min(r, self.avail_at(nbr, banned=pair))
        return total

    def avail_map(self, tid: int) -> dict[int, float]:
        """Collectible supply at every node of one tree (rerooting, O(tree))."""
        tree = self.trees.trees[tid]
        root = min(tree.nodes)
        parent: dict[int, int | None] = {root: None}
        order = [root]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for nbr, _ in self.tree_adj[v]:
                if nbr not in parent:
                    parent[nbr] = v
                    order.append(nbr)
        down: dict[int, float] = {}
        for v in reversed(order):
            d = max(self.p[v], 0.0)
            for nbr, pair in self.tree_adj[v]:
                if parent.get(nbr) == v:
                    d += min(down[nbr], self.residual_toward(pair, v))
            down[v] = d
        up: dict[int, float] = {root: 0.0}
        for v in order:
            children = [
                (nbr, pair) for nbr, pair in self.tree_adj[v] if parent.get(nbr) == v
            ]
            contrib = {
                nbr: min(down[nbr], self.residual_toward(pair, v))
                for nbr, pair in children
            }
            base = max(self.p[v], 0.0) + up[v] + sum(contrib.values())
            for nbr, pair in children:
                up[nbr] = min(
                    self.residual_toward(pair, nbr), base - contrib[nbr]
                )
        return {v: down[v] + up[v] for v in order}

    def fhat_map(self, tid: int, demand) -> dict[int, float]:
        """Rolling-demand estimator from the nearest root to every tree node."""
        tree = self.trees.trees[tid]
        roots = sorted(tree.roots & tree.nodes) or [min(tree.nodes)]
        fhat: dict[int, float] = {}
        queue: deque[int] = deque()
        for r in roots:
            fhat[r] = 0.0
            queue.append(r)
        while queue:
            x = queue.popleft()
            for nbr, _ in self.tree_adj[x]:
                if nbr not in fhat:
                    fhat[nbr] = fhat[x] + self.partition.cost(x, nbr) * demand[x]
                    queue.append(nbr)
        return fhat

    def rebalance(self, tid: int) -> None:
        """Route surplus to deficits inside one tree until no path remains."""
        nodes = sorted(self.trees.trees[tid].nodes)
        for _ in range(len(nodes) + 1):
            moved = False
            for y in nodes:
                if self.p[y] < -EPS:
                    got = self.collect(y, -self.p[y])
                    if got > EPS:
                        self.p[y] += got
                        moved = True
            if not moved:
                break

    def apply_sample(self, i: int, j: int) -> None:
        """Sample ``i -> j``: transfer value across, then settle the merged tree."""
        ti = self.trees.tree_of(i)
        if ti is None:
            raise ValueError(f"supply endpoint {i} is in no polytree")
        tj = self.trees.tree_of(j)
        if tj is not None:
            deficit = sum(
                max(0.0, -self.p[w]) for w in self.trees.trees[tj].nodes
            )
        else:
            deficit = max(0.0, -self.p[j])
        cap = self.partition.capacity(i, j)
        target = min(self.avail_at(i), cap, deficit)
        moved = self.collect(i, target) if target > EPS else 0.0
        tid = self.trees.add_edge(i, j)
        self.flows[(i, j)] = moved
        self._link(i, j)
        self.p[j] += moved
        self.order.append((i, j))
        self.rebalance(tid)

    def residuals(self) -> dict[int, float]:
        return {
            v: self.p[v]
            for v in sorted(self.partition.nodes)
            if abs(self.p[v]) > EPS
        }

    def covered(self) -> set[int]:
        out: set[int] = set()
        for (a, b) in self.flows:
            out.add(a)
            out.add(b)
        return out


def net_concad(
    partition: Partition,
    trees: PolytreeSet,
    values: dict[int, float],
    new_edge: tuple[int, int] | None = None,
    state: PartitionState | None = None,
) -> tuple[DualGraph, dict[int, float], PolytreeSet]:
    """Fold one sampled edge into the working state and condense the partition.

    Statelessly invoked (no ``state``), working flows are assumed zero, which
    matches the uncapacitated transfer semantics; the solver loop passes its
    persistent state instead.
    """
    if state is None:
        state = PartitionState(partition, trees=trees, values=values)
    if new_edge is not None:
        state.apply_sample(*new_edge)
    dual = build_dual(partition, state.trees, state.p)
    return dual, state.p, state.trees
