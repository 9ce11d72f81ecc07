"""Built-in worked-example networks used by the regression suite.

Each fixture mirrors a small network studied by hand: a 6-cycle where the
quadratic cost makes the MST orientation suboptimal, a two-source graph where
the best forest beats the best tree, the Partition-Problem reduction, a
16-node decomposition example, and two 6-node sampling walkthroughs (one
uncapacitated, one requiring repair). The IEEE-33 feeder ships with synthetic
values; its real loadings are not public here.

Fixtures are also stored as files under ``data/v1`` (see
:func:`write_fixture_files`); :func:`builtin_network` accepts either a
fixture name or the name of a shipped file.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

from .model import DistributionNetwork, Edge, RadialSolution
from .netgen import assign_balanced_values, load_network, save_network, UndirectedGraph

INF = math.inf


def fig2_network(d: float = 1.0) -> DistributionNetwork:
    """Single 6-cycle, one source supplying five unit sinks."""
    edges = [
        Edge(0, 1, INF, 1.0),
        Edge(0, 2, INF, 1.0),
        Edge(1, 3, INF, 1.0),
        Edge(3, 4, INF, 1.0),
        Edge(4, 5, INF, 2.0),
        Edge(2, 5, INF, 4.0),
    ]
    return DistributionNetwork(
        6,
        edges,
        supply={0: 5 * d},
        demand={i: d for i in range(1, 6)},
        name="fig2-cycle6",
    )


def fig2_mst_solution(d: float = 1.0) -> RadialSolution:
    """MST-based orientation; costs 32*d^2."""
    return RadialSolution(
        {(0, 1): 4 * d, (1, 3): 3 * d, (3, 4): 2 * d, (4, 5): d, (0, 2): d}
    )


def fig2_optimal_solution(d: float = 1.0) -> RadialSolution:
    """Optimal configuration; costs 22*d^2."""
    return RadialSolution(
        {(0, 1): 3 * d, (1, 3): 2 * d, (3, 4): d, (0, 2): 2 * d, (2, 5): d}
    )


def fig3_network(d: float = 1.0) -> DistributionNetwork:
    """Two sources where the optimal radial configuration is a forest."""
    edges = [
        Edge(0, 1, INF, 1.0),
        Edge(1, 2, INF, 1.0),
        Edge(1, 4, INF, 1.0),
        Edge(2, 3, INF, 1.0),
        Edge(4, 5, INF, 1.0),
        Edge(2, 5, INF, 1.5),
    ]
    return DistributionNetwork(
        6,
        edges,
        supply={0: 2 * d, 3: 2 * d},
        demand={1: d, 2: d, 4: d, 5: d},
        name="fig3-msf",
    )


def fig3_mst_solution(d: float = 1.0) -> RadialSolution:
    return RadialSolution(
        {(0, 1): 2 * d, (3, 2): 2 * d, (2, 1): d, (1, 4): 2 * d, (4, 5): d}
    )


def fig3_msf_solution(d: float = 1.0) -> RadialSolution:
    return RadialSolution(
        {(0, 1): 2 * d, (1, 4): d, (3, 2): 2 * d, (2, 5): d}
    )


def fig5_network() -> DistributionNetwork:
    """Partition reduction instance for A={3,4,5,4}, a0=2 (sources supply 9)."""
    from .oracle import partition_reduction_instance

    net = partition_reduction_instance([3, 4, 5, 4], 2)
    net.name = "fig5-reduction"
    return net


def fig5_feasible_solution() -> RadialSolution:
    """s1 serves v4,v2 and half of v0; s2 serves v3,v1 and half of v0."""
    return RadialSolution(
        {(0, 6): 4.0, (0, 4): 4.0, (0, 2): 1.0, (1, 5): 5.0, (1, 3): 3.0, (1, 2): 1.0}
    )


def fig5_nonradial_solution() -> RadialSolution:
    """Both sources feed v4 and v1; contains a cycle through the sources."""
    return RadialSolution(
        {
            (0, 6): 2.5,
            (1, 6): 1.5,
            (1, 5): 5.0,
            (0, 4): 4.0,
            (0, 3): 1.5,
            (1, 3): 1.5,
            (0, 2): 1.0,
            (1, 2): 1.0,
        }
    )


def fig6_network() -> DistributionNetwork:
    """16-node decomposition walkthrough (pendants, then a split at node 0)."""
    pairs = [
        (0, 3), (0, 5), (0, 6), (0, 7), (3, 4), (4, 5), (6, 8), (7, 10),
        (7, 9), (8, 15), (15, 9), (1, 7), (1, 9), (2, 8), (2, 13), (2, 14),
        (11, 12), (8, 11),
    ]
    demand = {3: 1, 4: 4, 5: 1, 6: 3, 7: 2, 8: 3, 9: 1, 10: 3, 11: 2, 12: 1,
              13: 2, 14: 3, 15: 3}
    return DistributionNetwork(
        16,
        [Edge(a, b, INF, 1.0) for a, b in pairs],
        supply={0: 5.0, 1: 12.0, 2: 12.0},
        demand={k: float(v) for k, v in demand.items()},
        name="fig6-decomposition",
    )


def fig7_network() -> DistributionNetwork:
    """Uncapacitated 6-cycle with three sources; sampling alone solves it."""
    pairs = [(0, 1), (1, 2), (0, 3), (3, 4), (4, 5), (5, 2)]
    return DistributionNetwork(
        6,
        [Edge(a, b, INF, 1.0) for a, b in pairs],
        supply={0: 3.0, 2: 10.0, 4: 20.0},
        demand={1: 15.0, 3: 11.0, 5: 7.0},
        name="fig7-sampling",
    )


def fig8_network() -> DistributionNetwork:
    """Capacitated two-source instance where sampling needs a repair swap.

    Capacities follow the worked example; cost coefficients are synthetic
    (chosen so the power-loss weights reproduce the documented sampling
    order).
    """
    edges = [
        Edge(0, 4, 20.0, 2.0),
        Edge(0, 5, 12.0, 1.0),
        Edge(4, 2, 20.0, 1.0),
        Edge(4, 5, 10.0, 1.0),
        Edge(4, 3, 10.0, 1.5),
        Edge(3, 2, 20.0, 1.5),
        Edge(1, 4, 10.0, 2.0),
        Edge(1, 5, 10.0, 2.0),
        Edge(1, 3, 20.0, 2.0),
    ]
    return DistributionNetwork(
        6,
        edges,
        supply={0: 20.0, 1: 30.0},
        demand={2: 20.0, 3: 10.0, 4: 10.0, 5: 10.0},
        name="fig8-rewire",
    )


_IEEE33_PAIRS_1BASED = [
    (1, 4), (3, 15), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 10),
    (10, 11), (11, 12), (12, 13), (13, 14), (14, 15), (15, 16), (16, 30),
    (16, 17), (2, 10), (2, 28), (27, 28), (7, 27), (12, 26), (26, 27),
    (25, 26), (24, 25), (24, 29), (23, 24), (22, 23), (21, 22), (20, 21),
    (19, 20), (20, 33), (18, 19), (17, 18), (29, 30), (1, 31), (31, 32),
    (32, 33),
]


def ieee33_topology() -> UndirectedGraph:
    pairs = tuple((a - 1, b - 1) for a, b in _IEEE33_PAIRS_1BASED)
    return UndirectedGraph(33, pairs)


def ieee33_network(seed: int = 0, slack: float = 4.0) -> DistributionNetwork:
    """IEEE-33 feeder topology with synthetic balanced values (3 sources)."""
    net = assign_balanced_values(
        ieee33_topology(),
        n_sources=[0, 1, 2],
        demand_range=(1.0, 5.0),
        slack=slack,
        seed=seed,
    )
    net.name = "ieee33-synthetic"
    return net


def ieee33_radial_orientation() -> list[tuple[int, int]]:
    """A radial orientation of the IEEE-33 feeder (node 10 has two parents)."""
    directed_1based = [
        (1, 4), (3, 15), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 10),
        (11, 10), (12, 11), (13, 12), (14, 13), (15, 14), (15, 16), (16, 30),
        (16, 17), (2, 28), (28, 27), (27, 26), (26, 25), (25, 24), (24, 29),
        (24, 23), (23, 22), (22, 21), (21, 20), (20, 19), (19, 18), (1, 31),
        (31, 32), (32, 33),
    ]
    return [(a - 1, b - 1) for a, b in directed_1based]


_BUILDERS = {
    "fig2": fig2_network,
    "fig3": fig3_network,
    "fig5": fig5_network,
    "fig6": fig6_network,
    "fig7": fig7_network,
    "fig8": fig8_network,
    "ieee33": ieee33_network,
}

DATA_VERSION = "v1"


def builtin_network(name: str) -> DistributionNetwork:
    if name not in _BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(_BUILDERS)}")
    return _BUILDERS[name]()


def fixture_path(name: str) -> Path:
    base = resources.files("radialflow") / "data" / DATA_VERSION
    return Path(str(base / f"{name}.json"))


def load_builtin_file(name: str) -> DistributionNetwork:
    return load_network(fixture_path(name))


def write_fixture_files(directory=None) -> list[Path]:
    """Regenerate the shipped fixture files (one per builder)."""
    base = (
        Path(directory)
        if directory is not None
        else fixture_path("x").parent
    )
    base.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(_BUILDERS):
        path = base / f"{name}.json"
        save_network(_BUILDERS[name](), path)
        written.append(path)
    return written
