"""Scale trees, chains, impressions, and end classification."""

from gridends.prime_ends.chains import (
    Chain,
    ChainReport,
    Impression,
    divides,
    enumerate_prime_end_approximations,
    impression,
    link_boundary,
    open_refinement,
    validate_chain,
)
from gridends.prime_ends.classify import (
    EndClassReport,
    SeparatorResult,
    classify_end,
    verify_separator,
)
from gridends.prime_ends.connectivity import (
    EndAtInfinity,
    EndsAtInfinityReport,
    FiniteConnectivityReport,
    GrowthWitnessReport,
    ends_at_infinity,
    finite_connectivity_check,
    growth_witness,
)
from gridends.prime_ends.tree import ScaleTree, TreeNode, scale_component_tree

__all__ = [
    "Chain",
    "ChainReport",
    "EndAtInfinity",
    "EndClassReport",
    "Impression",
    "EndsAtInfinityReport",
    "FiniteConnectivityReport",
    "GrowthWitnessReport",
    "ScaleTree",
    "SeparatorResult",
    "TreeNode",
    "classify_end",
    "divides",
    "ends_at_infinity",
    "enumerate_prime_end_approximations",
    "finite_connectivity_check",
    "growth_witness",
    "impression",
    "link_boundary",
    "open_refinement",
    "scale_component_tree",
    "validate_chain",
    "verify_separator",
]
