"""Boundary structure of rough planar domains on a grid.

Rasterizes open planar domains to cell lattices and computes, with certified
two-sided bounds where the quantities are metric: Mazurkiewicz distances,
scale trees and chains of nested cross-cut regions with their impressions
and end classification, behavior of chains under maps with quasisymmetry
diagnostics, and p-modulus of curve families with Loewner-style profiles.
"""

from gridends.errors import (
    BadParams,
    CertificateNotFound,
    Degenerate,
    Disconnected,
    DomainViolation,
    EmptyImpression,
    EmptyRegion,
    GridendsError,
    InteriorEmpty,
    NoCurves,
    RadiusUnresolvable,
    SpacingTooCoarse,
    TooLarge,
    UnknownGenerator,
)
from gridends.grids import (
    BoundaryAnchor,
    DomainSpec,
    GridDomain,
    Region,
    rasterize,
)

__version__ = "0.1.0"

__all__ = [
    "BadParams",
    "BoundaryAnchor",
    "CertificateNotFound",
    "Degenerate",
    "Disconnected",
    "DomainSpec",
    "DomainViolation",
    "EmptyImpression",
    "EmptyRegion",
    "GridDomain",
    "GridendsError",
    "InteriorEmpty",
    "NoCurves",
    "RadiusUnresolvable",
    "Region",
    "SpacingTooCoarse",
    "TooLarge",
    "UnknownGenerator",
    "__version__",
    "rasterize",
]
