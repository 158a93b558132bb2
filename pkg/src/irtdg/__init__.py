"""Individual rationality in topological distance games."""

from .model import (
    UNREACHABLE,
    Assignment,
    BoundedTable,
    DistanceFactor,
    EnmityStructure,
    Exponential,
    Instance,
    Reciprocal,
    Table,
    Topology,
    Violation,
    agent_utility,
    enmity_structure,
    eval_dff,
    is_individually_rational,
    shortest_distances,
    validate_instance,
)
from .solvers import (
    SolveResult,
    solve_auto,
    solve_brute_force,
    solve_naive,
    solve_path_instar,
    solve_single_source,
    verify_witness,
)

__version__ = "0.1.0"
