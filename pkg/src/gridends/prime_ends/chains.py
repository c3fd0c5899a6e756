"""Chains of nested regions, their validation, and impressions.

A chain is a finite nested sequence of connected regions whose relative
boundaries pull apart in the Mazurkiewicz metric and which sink into the
boundary. Validation measures each defining property at grid scale and
reports certified facts; interpretation (ordinary end, end at infinity,
divisibility) is layered on top.

The impression is the grid version of the intersection of the link
closures: one-cell closure collars of the links, intersected over the
whole chain. For nested links that intersection collapses to the cells
adjacent to the deepest link but outside the first one, which in practice
are the removed or exterior cells the chain presses against. Frame cells
on clipped window sides are continuation artifacts and never impression
cells, so a chain that only marches out through a clipped side has an
empty impression; at finite truncation that is the signature of an end at
infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from gridends.errors import EmptyImpression, InteriorEmpty
from gridends.grids.domain import BoundaryAnchor, GridDomain, Region
from gridends.grids.ops import (
    boundary_collar,
    component_containing,
    dilate,
    frame_cells,
    frame_mask,
    inner_boundary,
    neighbor_any,
    points_diameter,
)
from gridends.mazurkiewicz.bracket import IntervalEstimate, mazurkiewicz_set_distance
from gridends.prime_ends.tree import ScaleTree

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True, eq=False)
class Impression:
    """Boundary cells a chain sinks into.

    Cells live on the window lattice and are usually removed or exterior
    cells, so they are stored as (ix, iy) rows rather than as a Region of
    domain cells. Connectivity is judged in the 8-neighbor collar graph,
    matching how a staircase of boundary cells traces one boundary arc.
    """

    cells: NDArray[np.int64]
    centers: NDArray[np.float64]
    connected: bool
    diameter: float
    singleton: bool

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True, eq=False)
class ChainReport:
    """Measured chain properties; valid summarizes the defining ones."""

    nested: bool
    bounded_links: tuple[bool, ...]
    separations: tuple[IntervalEstimate, ...]
    separated: tuple[bool, ...]
    impression_in_boundary: bool
    escapes_window: bool
    valid: bool


@dataclass(frozen=True, eq=False)
class Chain:
    """Nested sequence of connected regions, shallowest first."""

    domain: GridDomain
    links: tuple[Region, ...]
    radii: tuple[float, ...] | None = None
    anchor: BoundaryAnchor | None = None
    report: ChainReport | None = None
    impression: Impression | None = None

    def __post_init__(self) -> None:
        if len(self.links) < 1:
            raise InteriorEmpty("chain needs at least one link")

    @property
    def deepest(self) -> Region:
        return self.links[-1]

    def __len__(self) -> int:
        return len(self.links)


def enumerate_prime_end_approximations(
    tree: ScaleTree, validate: bool = True
) -> list[Chain]:
    """Root-to-leaf chains of the scale tree, one per deepest component.

    Ordered by the leaf component order (smallest member cell first), so
    repeated runs enumerate identically. With validate on, each chain
    carries its validation report and impression (None when empty).
    """
    chains = []
    for leaf in tree.leaves():
        links = [leaf.region]
        node = leaf
        for level in range(tree.depth, 0, -1):
            parent = tree.levels[level - 1][node.parent_index]
            links.append(parent.region)
            node = parent
        chain = Chain(
            domain=tree.domain,
            links=tuple(reversed(links)),
            radii=tree.radii,
            anchor=tree.anchor,
        )
        if validate:
            rep = validate_chain(tree.domain, chain)
            try:
                imp = impression(tree.domain, chain)
            except EmptyImpression:
                imp = None
            chain = replace(chain, report=rep, impression=imp)
        chains.append(chain)
    return chains


def link_boundary(domain: GridDomain, link: Region) -> Region:
    """The part of a link's boundary interior to the domain."""
    return inner_boundary(domain, link)


def validate_chain(domain: GridDomain, chain: Chain) -> ChainReport:
    """Measure nestedness, boundedness, separation, and boundary descent.

    Separation between consecutive links is the certified lower bound of
    the Mazurkiewicz distance between their relative boundaries; a link
    whose relative boundary is empty separates vacuously. A link is
    bounded at grid scale when it avoids the window frame on clipped
    sides. The impression lies in the boundary when the deepest link
    comes within two spacings of the true boundary; the chain escapes the
    window when the deepest link touches a clipped frame side.
    """
    nested = all(
        b.is_subset(a) for a, b in zip(chain.links, chain.links[1:])
    )
    clipped_frame = frame_cells(domain)
    bounded = tuple(
        not link.intersects(clipped_frame) for link in chain.links
    )
    separations = []
    separated = []
    for a, b in zip(chain.links, chain.links[1:]):
        ba = link_boundary(domain, a)
        bb = link_boundary(domain, b)
        if ba.is_empty or bb.is_empty:
            est = IntervalEstimate(np.inf, np.inf, domain.spacing)
        else:
            est = mazurkiewicz_set_distance(domain, ba, bb)
        separations.append(est)
        separated.append(bool(est.lower > 0))
    deep = dilate(domain, chain.deepest, 2)
    sinks = deep.intersects(boundary_collar(domain))
    escapes = chain.deepest.intersects(clipped_frame)
    return ChainReport(
        nested=nested,
        bounded_links=bounded,
        separations=tuple(separations),
        separated=tuple(separated),
        impression_in_boundary=bool(sinks),
        escapes_window=bool(escapes),
        valid=bool(nested and all(separated) and (sinks or escapes)),
    )


def impression(domain: GridDomain, chain: Chain) -> Impression:
    """Intersection of the one-cell closure collars of the chain's links.

    For nested links this is the set of lattice cells adjacent to the
    deepest link but outside the first link, with clipped frame cells
    removed. Raises EmptyImpression when nothing remains; the message
    notes whether the deepest link escapes through a clipped side.
    """
    fringe = neighbor_any(chain.deepest.mask()) & ~chain.links[0].mask()
    fringe &= ~frame_mask(domain)
    if not fringe.any():
        raise EmptyImpression(
            "chain reaches no boundary cell"
            + (
                " but escapes through a clipped side"
                if chain.deepest.intersects(frame_cells(domain))
                else ""
            )
        )
    cells = np.argwhere(fringe).astype(np.int64)
    x0, y0 = domain.window[0], domain.window[1]
    h = domain.spacing
    centers = np.stack(
        [x0 + (cells[:, 0] + 0.5) * h, y0 + (cells[:, 1] + 0.5) * h], axis=1
    )
    _, count = ndimage.label(fringe, structure=_EIGHT)
    diam = points_diameter(centers)
    return Impression(
        cells=cells,
        centers=centers,
        connected=count == 1,
        diameter=diam,
        singleton=bool(diam <= 4 * h + 1e-12),
    )


def divides(domain: GridDomain, a: Chain, b: Chain) -> bool:
    """Whether chain a divides chain b: every b-link swallows some a-link."""
    for link_b in b.links:
        if not any(link_a.is_subset(link_b) for link_a in a.links):
            return False
    return True


def open_refinement(domain: GridDomain, chain: Chain) -> Chain:
    """Replace each link by the domain-interior part it retracts to.

    Strips every cell with a domain neighbor outside the link, then keeps
    the component containing the deepest link's core. Raises InteriorEmpty
    when a link has no interior cell left at this spacing.
    """
    from gridends.grids.ops import interior_within

    new_links = []
    for link in chain.links:
        inner = interior_within(domain, link)
        if inner.is_empty:
            raise InteriorEmpty(
                "link has no interior cells at this spacing"
            )
        new_links.append(inner)
    # Keep each refined link connected through the deepest core.
    core = new_links[-1]
    seed = int(core.ids[0])
    refined = []
    for inner in new_links:
        comp = component_containing(domain, seed, inner)
        refined.append(comp if comp is not None else inner)
    return Chain(
        domain=domain,
        links=tuple(refined),
        radii=chain.radii,
        anchor=chain.anchor,
    )
