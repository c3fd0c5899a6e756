"""Rasterized planar domains: lattice model, generators, region operations."""

from gridends.grids.domain import (
    BoundaryAnchor,
    DomainSpec,
    GridDomain,
    Region,
    Window,
)
from gridends.grids.generators import GENERATORS, rasterize
from gridends.grids.io import load_mask, load_spec, save_mask, save_spec
from gridends.grids.ops import (
    ball,
    boundary_collar,
    chordal_distance,
    chordal_to_infinity,
    component_containing,
    components,
    diameter,
    dilate,
    frame_cells,
    inner_boundary,
    interior_within,
    stereographic_project,
)

__all__ = [
    "BoundaryAnchor",
    "DomainSpec",
    "GENERATORS",
    "GridDomain",
    "Region",
    "Window",
    "ball",
    "boundary_collar",
    "chordal_distance",
    "chordal_to_infinity",
    "component_containing",
    "components",
    "diameter",
    "dilate",
    "frame_cells",
    "inner_boundary",
    "interior_within",
    "load_mask",
    "load_spec",
    "rasterize",
    "save_mask",
    "save_spec",
    "stereographic_project",
]
