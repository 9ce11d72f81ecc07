"""Weighted edge selection, the per-partition sampling loop, and repair.

Candidates are dual edges joining a supply-positive super node to a
non-positive one (the XOR gate); each gets a weight from a pluggable weight
function, normalized per iteration. Selection prioritizes, in order:

1. pendant rescue: an un-sampled super node whose deficit only one adjacent
   super can cover is served immediately by its viable supplier;
2. the capacity-sufficient queue: candidates whose edge capacity does not
   truncate the deliverable supply below the immediate need;
3. the fallback queue, by weight.

Repair (rewire) runs when residual values remain after sampling: a bounded
best-first search over single edge swaps (insert a non-sampled edge, delete
one edge on the induced cycle), scoring each polyforest by the capacity
violations and leftover imbalance of its unique flow.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict, deque

from .model import EPS
from .decompose import Partition
from .condense import PolytreeSet, PartitionState, DualGraph, build_dual
from .treeflow import signed_forest_flows


def power_weight(p_i: float, cost_coeff: float, demand: float, fhat: float = 0.0) -> float:
    """Power-loss sampling weight: supply over projected squared-flow loss.

    Returns ``inf`` on a zero denominator (zero-cost, zero-demand edge); the
    sampler replaces that with the iteration's maximum weight.
    """
    denom = cost_coeff * demand * demand + fhat
    if denom <= 0.0:
        return math.inf
    return p_i / denom


def uniform_weight(p_i: float, cost_coeff: float = 0.0, demand: float = 0.0,
                   fhat: float = 0.0) -> float:
    """Ablation weight: available supply only."""
    return p_i


WEIGHT_FUNCTIONS = {"power": power_weight, "uniform": uniform_weight}


def normalize_weights(raw) -> list[float]:
    """Scale weights to sum to one (uniform when all are zero)."""
    ws = list(raw)
    total = sum(ws)
    if total <= 0.0:
        return [1.0 / len(ws)] * len(ws) if ws else []
    return [w / total for w in ws]


class _Candidate:
    __slots__ = ("u", "v", "s", "t", "weight", "avail", "fhat")

    def __init__(self, u, v, s, t):
        self.u, self.v, self.s, self.t = u, v, s, t
        self.weight = 0.0
        self.avail = 0.0
        self.fhat = 0.0


def gather_candidates(
    dual: DualGraph, state: PartitionState, weight_fn=power_weight
) -> list[_Candidate]:
    """Weighted supply-to-demand candidates (positive weight only when exactly
    one incident super node is supply-positive), sorted by descending weight."""
    part = state.partition
    supers = dual.supers
    cands: list[_Candidate] = []
    for de in dual.edges:
        pu = supers[de.u].supply_value
        pv = supers[de.v].supply_value
        if (pu > EPS) == (pv > EPS):
            continue
        if pu > EPS:
            cands.append(_Candidate(de.u, de.v, de.s, de.t))
        else:
            cands.append(_Candidate(de.v, de.u, de.t, de.s))
    if not cands:
        return []

    avail_cache: dict[int, dict[int, float]] = {}
    fhat_cache: dict[int, dict[int, float]] = {}
    demand = _original_demand(state)
    for c in cands:
        tid = state.trees.tree_of(c.s)
        if tid not in avail_cache:
            avail_cache[tid] = state.avail_map(tid)
            fhat_cache[tid] = state.fhat_map(tid, demand)
        c.avail = avail_cache[tid][c.s]
        c.fhat = fhat_cache[tid][c.s]
        d_eff = max(0.0, -supers[c.v].supply_value)
        c.weight = weight_fn(c.avail, part.cost(c.s, c.t), d_eff, c.fhat)

    finite = [c.weight for c in cands if math.isfinite(c.weight)]
    top = max(finite) if finite else 1.0
    for c in cands:
        if not math.isfinite(c.weight):
            c.weight = top  # zero denominator gets the iteration's maximum
    norm = normalize_weights([c.weight for c in cands])
    for c, w in zip(cands, norm):
        c.weight = w
    cands.sort(key=lambda c: (-c.weight, c.s, c.t))
    return cands


def classify_candidates(dual: DualGraph, state: PartitionState, cands):
    """Split candidates into the capacity-sufficient and fallback queues."""
    part = state.partition
    supers = dual.supers
    qbar: list[_Candidate] = []
    qhat: list[_Candidate] = []
    for c in cands:
        needed = max(0.0, -max(state.p[c.t], supers[c.v].supply_value))
        if part.capacity(c.s, c.t) + EPS >= min(c.avail, needed):
            qbar.append(c)
        else:
            qhat.append(c)
    return qbar, qhat


def _pendant_rescue(dual: DualGraph, cands):
    # an un-sampled super whose deficit only one adjacent super can cover is
    # served immediately by that supplier
    supers = dual.supers
    suppliers: dict[int, set[int]] = defaultdict(set)
    for de in dual.edges:
        for side, other in ((de.u, de.v), (de.v, de.u)):
            if supers[other].kind == "unsampled":
                deficit = -supers[other].supply_value
                if deficit > EPS and supers[side].supply_value >= deficit - EPS:
                    suppliers[other].add(side)
    for c in cands:
        if supers[c.v].kind != "unsampled":
            continue
        if suppliers.get(c.v) == {c.u}:
            return (c.s, c.t)
    return None


def sampler_select(dual: DualGraph, state: PartitionState, weight_fn=power_weight):
    """Pick the next directed edge ``(i, j)``, oriented supply to demand.

    Returns ``None`` when no candidate remains (the partition is complete).
    """
    cands = gather_candidates(dual, state, weight_fn)
    if not cands:
        # no supply-positive candidate: either zero-value regions remain
        # uncovered (attach them) or the partition is complete
        if dual.unsampled():
            return _fallback_candidate(dual, state)
        return None
    rescue = _pendant_rescue(dual, cands)
    if rescue is not None:
        return rescue
    qbar, qhat = classify_candidates(dual, state, cands)
    chosen = (qbar + qhat)[0]
    return (chosen.s, chosen.t)


def _original_demand(state: PartitionState) -> dict[int, float]:
    # partition values are adjusted at separation nodes; the weight estimator
    # uses the demand magnitude each node started with
    return {
        v: max(0.0, -state.partition.values[v]) for v in state.partition.nodes
    }


def _fallback_candidate(dual: DualGraph, state: PartitionState):
    """No supply-positive candidate: attach a zero-value region deterministically."""
    best = None
    for de in dual.edges:
        u, v, s, t = de.u, de.v, de.s, de.t
        if dual.supers[v].kind == "sampled" and dual.supers[u].kind == "unsampled":
            u, v, s, t = v, u, t, s
        if dual.supers[u].kind == "sampled" and state.trees.tree_of(s) is not None:
            key = (dual.supers[v].kind != "unsampled", s, t)
            if best is None or key < best[0]:
                best = (key, (s, t))
    if best is None:
        raise RuntimeError("no candidate edges: partition already complete")
    return best[1]


def run_partition(
    partition: Partition, weight_fn=power_weight
) -> tuple[list[tuple[int, int]], dict[int, float], PartitionState]:
    """Sample edges until every partition node is covered.

    Returns the ordered sampled edges, the residual nodal values (all zero
    iff no capacity blockage occurred), and the final working state.
    """
    state = PartitionState(partition)
    if not partition.sources:
        _span_zero_partition(state)
        return list(state.order), state.residuals(), state

    total = len(partition.nodes)
    guard = 2 * total + 4
    for _ in range(guard):
        covered_all = len(state.covered()) >= total
        if covered_all:
            # node coverage alone is not enough: distinct polytrees with
            # nonzero aggregates can still merge and settle each other
            imbalanced = any(
                abs(t.aggregate(state.p)) > EPS for t in state.trees.trees.values()
            )
            if not imbalanced or len(state.trees.trees) <= 1:
                break
        dual = build_dual(partition, state.trees, state.p)
        edge = sampler_select(dual, state, weight_fn)
        if edge is None:
            break  # capacity blockage: hand the residuals to rewire
        state.apply_sample(*edge)
    else:
        raise RuntimeError("sampling loop failed to cover the partition")
    return list(state.order), state.residuals(), state


def _span_zero_partition(state: PartitionState) -> None:
    # all-zero values: any spanning forest works, flows are zero
    part = state.partition
    seen: set[int] = set()
    for start in sorted(part.nodes):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in part.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    state.flows[(v, w)] = 0.0
                    state.order.append((v, w))
                    queue.append(w)


def _forest_paths(edge_set, a: int, b: int):
    """Unique path a..b in the forest `edge_set`, or None if disconnected."""
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = defaultdict(list)
    for (x, y) in edge_set:
        adj[x].append((y, (x, y)))
        adj[y].append((x, (x, y)))
    prev: dict[int, tuple[int, tuple[int, int]] | None] = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w, pair in adj[v]:
            if w not in prev:
                prev[w] = (v, pair)
                queue.append(w)
    if b not in prev:
        return None
    path = []
    v = b
    while prev[v] is not None:
        v, pair = prev[v]
        path.append(pair)
    return path


def _score_edge_set(partition: Partition, values, pairs) -> tuple[float, dict, dict]:
    caps = {}
    for (a, b) in pairs:
        caps[(a, b)] = partition.capacity(a, b)
    n = max(partition.nodes) + 1
    flows, residuals, violation = signed_forest_flows(n, list(pairs), caps, values)
    imbalance = sum(abs(r) for v, r in residuals.items() if v in partition.nodes)
    return violation + imbalance, flows, residuals


def rewire(
    partition: Partition,
    values: dict[int, float],
    sampled: list[tuple[int, int]],
    trees: PolytreeSet | None = None,
    max_states: int = 1200,
) -> tuple[list[tuple[int, int]], bool]:
    """Capacity-aware edge swapping toward a feasible polyforest.

    Bounded best-first search over states reachable by swap moves (insert a
    non-sampled edge; delete one edge of the induced cycle, or none when the
    insertion joins two components). States are scored by the unique flow of
    the polyforest: total capacity violation plus leftover imbalance. Returns
    the repaired directed edge list and whether all deficits were resolved;
    an unresolved result signals the instance violates the feasibility
    assumption.
    """
    base = frozenset((a, b) if a < b else (b, a) for a, b in sampled)
    all_pairs = sorted(e.key() for e in partition.edges)

    def extract(pair_set) -> list[tuple[int, int]]:
        score, flows, _ = _score_edge_set(partition, values, sorted(pair_set))
        oriented = []
        sampled_dir = {}
        for (a, b) in sampled:
            key = (a, b) if a < b else (b, a)
            sampled_dir[key] = (a, b)
        for (a, b) in sorted(pair_set):
            f = flows[(a, b)]
            if f < -EPS:
                oriented.append((b, a))
            elif f > EPS:
                oriented.append((a, b))
            else:
                oriented.append(sampled_dir.get((a, b), (a, b)))
        # keep the original sampling order where edges survived
        order_index = {}
        for idx, (a, b) in enumerate(sampled):
            order_index[(a, b) if a < b else (b, a)] = idx
        oriented.sort(key=lambda d: order_index.get(
            (d[0], d[1]) if d[0] < d[1] else (d[1], d[0]), len(sampled)
        ))
        return oriented

    score0, _, _ = _score_edge_set(partition, values, sorted(base))
    if score0 <= 1e-9:
        return extract(base), True

    seq = 0
    heap = [(score0, 0, seq, base)]
    visited = {base}
    best = (score0, base)
    scored = 0
    while heap and scored < max_states:
        score, depth, _, current = heapq.heappop(heap)
        for ins in all_pairs:
            if ins in current:
                continue
            path = _forest_paths(current, ins[0], ins[1])
            if path is None:
                successors = [current | {ins}]
            else:
                successors = [
                    (current - {rm}) | {ins} for rm in sorted(path)
                ]
            for nxt in successors:
                nxt = frozenset(nxt)
                if nxt in visited:
                    continue
                visited.add(nxt)
                s, _, _ = _score_edge_set(partition, values, sorted(nxt))
                scored += 1
                if s <= 1e-9:
                    return extract(nxt), True
                if s < best[0]:
                    best = (s, nxt)
                heapq.heappush(heap, (s, depth + 1, seq := seq + 1, nxt))
                if scored >= max_states:
                    break
            if scored >= max_states:
                break
    return extract(best[1]), False
