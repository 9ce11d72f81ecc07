"""Feasible low-cost radial configurations for capacitated distribution networks."""

from .model import (
    EPS,
    DistributionNetwork,
    Edge,
    InfeasibleError,
    NetworkError,
    RadialSolution,
    SchemaError,
    build_network,
    evaluate_cost,
    initial_values,
)
from .verify import (
    VerificationReport,
    check_capacity,
    check_conservation,
    check_radiality,
    verify_solution,
)
from .treeflow import flows_on_polyforest, solve_tree_flow
from .decompose import (
    Partition,
    PartitionSet,
    Subgraph,
    balance_separation_values,
    decompose,
    islander_partition,
    pre_process,
)
from .condense import (
    DualEdge,
    DualGraph,
    PartitionState,
    Polytree,
    PolytreeSet,
    SuperNode,
    build_dual,
    connected_components,
    net_concad,
    tree_update,
)
from .sampler import (
    normalize_weights,
    power_weight,
    rewire,
    run_partition,
    sampler_select,
    uniform_weight,
)
from .solver import forward_solve, merge_solutions
from .oracle import (
    brute_force_feasible,
    brute_force_optimal,
    count_spanning_trees,
    enumerate_spanning_trees,
    has_equal_partition,
    partition_reduction_instance,
)
from .netgen import (
    UndirectedGraph,
    assign_balanced_values,
    load_network,
    load_solution,
    save_network,
    save_solution,
    watts_strogatz,
)

__version__ = "0.1.0"
