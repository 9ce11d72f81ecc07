"""Polynomial-time feasibility verification of candidate radial solutions.

Three independent checks: capacity bounds per edge, flow conservation per
node, and radiality (acyclic underlying undirected graph) via FIFO leaf
peeling. All checks are report-only; none raises on an infeasible solution.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .model import EPS, DistributionNetwork, NetworkError, RadialSolution


@dataclass
class VerificationReport:
    capacity_ok: bool
    conservation_ok: bool
    radial_ok: bool
    max_capacity_violation: float = 0.0
    max_conservation_residual: float = 0.0
    offending_items: list = field(default_factory=list)

    def feasible(self) -> bool:
        return self.capacity_ok and self.conservation_ok and self.radial_ok


def check_capacity(
    network: DistributionNetwork, sol: RadialSolution, tol: float = EPS
) -> tuple[bool, list[tuple[tuple[int, int], float]]]:
    """True iff 0 <= x <= capacity for every edge, within ``tol``.

    Returns the verdict plus a list of ``(directed_edge, violation)`` pairs.
    """
    violations = []
    for (i, j), x in sol.flows.items():
        edge = network.edge_between(i, j)
        if edge is None:
            raise NetworkError(f"solution edge ({i},{j}) absent from network")
        excess = max(-x, x - edge.capacity)
        if excess > tol:
            violations.append(((i, j), excess))
    return not violations, violations


def check_conservation(
    network: DistributionNetwork, sol: RadialSolution, tol: float = EPS
) -> tuple[bool, dict[int, float]]:
    """True iff inflow - outflow = demand - supply at every node, within ``tol``.

    The returned mapping carries the signed residual
    ``(inflow - outflow) - (demand - supply)`` for every violating node.
    """
    net_in: dict[int, float] = defaultdict(float)
    for (i, j), x in sol.flows.items():
        if network.edge_between(i, j) is None:
            raise NetworkError(f"solution edge ({i},{j}) absent from network")
        net_in[j] += x
        net_in[i] -= x
    residuals = {}
    for node in range(network.node_count):
        r = net_in.get(node, 0.0) - (network.demand[node] - network.supply[node])
        if abs(r) > tol:
            residuals[node] = r
    return not residuals, residuals


def check_radiality(network: DistributionNetwork, sol: RadialSolution) -> bool:
    """True iff the underlying undirected graph of the solution is acyclic.

    Implements the queue-based peeling loop: repeatedly retrieve a node of
    undirected degree one, delete its sole incident edge and decrement the
    neighbor's degree. The solution is radial iff exactly ``len(sol)`` edge
    removals occur (no cycle survives).
    """
    pairs = list(sol.flows)
    if len(set((i, j) if i < j else (j, i) for i, j in pairs)) != len(pairs):
        return False  # an undirected edge used in both orientations is a cycle
    degree: dict[int, int] = defaultdict(int)
    incident: dict[int, set[tuple[int, int]]] = defaultdict(set)
    for i, j in pairs:
        degree[i] += 1
        degree[j] += 1
        incident[i].add((i, j))
        incident[j].add((i, j))
    queue = deque(node for node in sorted(degree) if degree[node] == 1)
    removed = 0
    while queue:
        node = queue.popleft()
        if not incident[node]:
            continue
        (edge,) = incident[node]
        i, j = edge
        other = j if node == i else i
        incident[node].remove(edge)
        incident[other].discard(edge)
        degree[node] -= 1
        degree[other] -= 1
        removed += 1
        if degree[other] == 1:
            queue.append(other)
    return removed == len(pairs)


def verify_solution(
    network: DistributionNetwork, sol: RadialSolution, tol: float = EPS
) -> VerificationReport:
    """Run the three-step feasibility check and aggregate a report."""
    cap_ok, cap_violations = check_capacity(network, sol, tol)
    con_ok, residuals = check_conservation(network, sol, tol)
    rad_ok = check_radiality(network, sol)
    offending: list = [e for e, _ in cap_violations]
    offending.extend(sorted(residuals))
    return VerificationReport(
        capacity_ok=cap_ok,
        conservation_ok=con_ok,
        radial_ok=rad_ok,
        max_capacity_violation=max((v for _, v in cap_violations), default=0.0),
        max_conservation_residual=max(
            (abs(r) for r in residuals.values()), default=0.0
        ),
        offending_items=offending,
    )
