"""Series-parallel models of elastoplastic conducting spring lattices and their minimal-cost design."""

__version__ = "0.1.0"

from .bounds import (
    CertificationReport,
    DominanceReport,
    ReducedProblem,
    SubcaseBound,
    certify,
    check_dominance,
    check_proposition2,
    lift,
    lookup,
    registry,
    registry_table,
    subcases_of,
)
from .evaluators import (
    ConstraintParams,
    DomainError,
    Evaluation,
    cost,
    evaluate,
    performance,
    resistance,
    response_force,
)
from .loading import SimulationError, SimulationResult, simulate_loading
from .network import (
    CASE_IDS,
    Leaf,
    Parallel,
    Series,
    TopologyError,
    TopologySyntaxError,
    canonical_case,
    case_resistance_formula,
    parse_topology,
    print_topology,
    random_topology,
)
from .solvers import GridSpec, SolveReport, brute_force, solve_all, solve_reduced
