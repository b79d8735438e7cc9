"""Budgeted influence maximization with purchasable edges.

An instance is a directed social graph with independent-cascade edge
probabilities, a set of priced candidate edges, and one budget covering
both seed nodes (price 1 each) and candidate edges (price in [0, 1],
only buyable from a chosen seed). The package provides exact and Monte
Carlo spread evaluation under common random numbers, several greedy
solvers with proved worst-case factors, an exhaustive oracle for small
instances, the analytic factor curves, and a CLI (``spreadopt``).
"""
from .money import Money, ONE, TICK, ZERO, money_sum
from .graph import (
    CandidateEdge,
    Edge,
    GraphFormatError,
    InvalidSolutionError,
    NoCandidatesError,
    SocialGraph,
    Solution,
    empty_solution,
    expand_candidate_config,
    load_graph,
    make_solution,
    parse_candidate_lines,
    parse_edge_lines,
    serialize_candidates,
    serialize_graph,
    solution_cost,
    validate_solution,
)
from .sampling import LiveEdgeSample, SampleBank, derive_seed
from .spread import (
    Evaluator,
    ExactEvaluator,
    ExactLimitError,
    MonteCarloEvaluator,
    SpreadEstimate,
    delta,
    delta_live_edge_sum,
    reachable,
    required_replications,
    sigma_exact,
    sigma_mc,
)
from .greedy import (
    EnumerationLimitError,
    enum_greedy,
    greedy_lb,
    greedy_lb_restricted,
    seed_only_greedy,
)
from .threshold import best_bundle_move, budgeted_edge_greedy, greedy_general
from .oracle import (
    OracleLimitError,
    OracleResult,
    brute_force_edge_solve,
    brute_force_solve,
)
from .ratios import (
    Q,
    crossing_points,
    factor_general,
    factor_lb_greedy,
    factor_seed_only,
    factor_table,
    general_constant,
    optimal_threshold,
    write_factor_csv,
)
from .generator import corpus, generate_instance
from .estimators import (
    SOLVERS,
    BaseSpreadSolver,
    BruteForceSolver,
    EnumerationGreedySolver,
    RatioGreedySolver,
    SeedOnlySolver,
    ThresholdGreedySolver,
)
from .report import RunReport, bound_block, solution_block, spread_block
from .verification import CheckResult, run_verification

__version__ = "1.0.0"

__all__ = [
    "Money", "ONE", "TICK", "ZERO", "money_sum",
    "CandidateEdge", "Edge", "GraphFormatError", "InvalidSolutionError",
    "NoCandidatesError", "SocialGraph", "Solution", "empty_solution",
    "expand_candidate_config", "load_graph", "make_solution",
    "parse_candidate_lines", "parse_edge_lines", "serialize_candidates",
    "serialize_graph", "solution_cost", "validate_solution",
    "LiveEdgeSample", "SampleBank", "derive_seed",
    "Evaluator", "ExactEvaluator", "ExactLimitError", "MonteCarloEvaluator",
    "SpreadEstimate", "delta", "delta_live_edge_sum", "reachable",
    "required_replications", "sigma_exact", "sigma_mc",
    "EnumerationLimitError", "enum_greedy", "greedy_lb",
    "greedy_lb_restricted", "seed_only_greedy",
    "best_bundle_move", "budgeted_edge_greedy", "greedy_general",
    "OracleLimitError", "OracleResult", "brute_force_edge_solve",
    "brute_force_solve",
    "Q", "crossing_points", "factor_general", "factor_lb_greedy",
    "factor_seed_only", "factor_table", "general_constant",
    "optimal_threshold", "write_factor_csv",
    "corpus", "generate_instance",
    "SOLVERS", "BaseSpreadSolver", "BruteForceSolver",
    "EnumerationGreedySolver", "RatioGreedySolver", "SeedOnlySolver",
    "ThresholdGreedySolver",
    "RunReport", "bound_block", "solution_block", "spread_block",
    "CheckResult", "run_verification",
    "__version__",
]
