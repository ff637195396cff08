"""Feasibility criteria, exact search and a constructive solver for the
equal-cardinality weighted bin packing problem: ``d`` balls of each of ``n``
given weights into ``n`` bins of given capacities, ``d`` balls per bin."""

from .core import (
    Assignment,
    CapacityProfile,
    ConjugateProfile,
    GapVector,
    Instance,
    ProfileError,
    WeightGapProfile,
    WeightProfile,
    b_constant,
    conjugate,
    d_threshold,
    gap_vector,
    is_k_feasible,
    make_instance,
    normalize,
    weight_gap_profile,
)
from .criteria import (
    CriteriaReport,
    Feasibility,
    Verdict,
    classify,
    necessary_conditions,
    sufficient_conditions,
)
from .oracle import BudgetExceeded, OracleError, OracleResult, decide, min_bin1_weight
from .solver import (
    DescentTrace,
    MatchingPermutation,
    Move,
    SolveResult,
    SolverConfig,
    StallError,
    Transfer,
    boost_top_count,
    descend,
    find_permutation,
    normalize_suffix,
    relief_swap,
    shrink_gaps,
    solve,
)
from .witness import (
    UnsupportedWeightsError,
    WitnessInstance,
    WitnessVerification,
    curated_witness,
    extremal_witness,
    relaxed_witness,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BudgetExceeded",
    "CapacityProfile",
    "ConjugateProfile",
    "CriteriaReport",
    "DescentTrace",
    "Feasibility",
    "GapVector",
    "Instance",
    "MatchingPermutation",
    "Move",
    "OracleError",
    "OracleResult",
    "ProfileError",
    "SolveResult",
    "SolverConfig",
    "StallError",
    "Transfer",
    "UnsupportedWeightsError",
    "Verdict",
    "WeightGapProfile",
    "WeightProfile",
    "WitnessInstance",
    "WitnessVerification",
    "b_constant",
    "boost_top_count",
    "classify",
    "conjugate",
    "curated_witness",
    "d_threshold",
    "decide",
    "descend",
    "extremal_witness",
    "find_permutation",
    "gap_vector",
    "is_k_feasible",
    "make_instance",
    "min_bin1_weight",
    "necessary_conditions",
    "normalize",
    "normalize_suffix",
    "relaxed_witness",
    "relief_swap",
    "shrink_gaps",
    "solve",
    "sufficient_conditions",
    "verify_witness",
    "weight_gap_profile",
]
