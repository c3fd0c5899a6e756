"""Discrete p-modulus of curve families, Loewner profiles, QC distortion."""

from gridends.modulus.loewner import (
    LoewnerProfile,
    fit_profile,
    loewner_profile,
    phi,
    relative_distance,
)
from gridends.modulus.oracle import (
    CURVE_CAP,
    curve_incidence,
    enumerate_simple_curves,
    modulus_oracle_small,
)
from gridends.modulus.qc import (
    DistortionBracket,
    box_side_regions,
    push_curve,
    qc_distortion,
    sample_box_families,
)
from gridends.modulus.solver import (
    CurveFamilySpec,
    ModulusSolution,
    SolveRound,
    modulus,
    solve_family,
)

__all__ = [
    "CURVE_CAP",
    "CurveFamilySpec",
    "DistortionBracket",
    "LoewnerProfile",
    "ModulusSolution",
    "SolveRound",
    "box_side_regions",
    "curve_incidence",
    "enumerate_simple_curves",
    "fit_profile",
    "loewner_profile",
    "modulus",
    "modulus_oracle_small",
    "phi",
    "push_curve",
    "qc_distortion",
    "relative_distance",
    "sample_box_families",
    "solve_family",
]
