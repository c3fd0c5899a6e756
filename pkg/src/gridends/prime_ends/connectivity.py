"""Finite connectivity at a boundary point and ends at infinity.

The finite-connectivity check counts, per tested radius, the components of
the boundary ball that touch the anchor and asks whether some smaller ball
is entirely covered by them. A boundary point where arbitrarily small free
slivers survive outside every touching component fails the covering
condition.

Ends at infinity are the unbounded complement components of certified
Mazurkiewicz balls around an interior basepoint: the join-radius field
gives, for every cell, a two-sided handle on its Mazurkiewicz distance
from the basepoint, so sublevel sets of the field are compact exhaustions
with small metric diameter, and complement components that reach a clipped
window side are the grid trace of ends at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from gridends.grids.domain import BoundaryAnchor, GridDomain, Region
from gridends.prime_ends.chains import Chain, ChainReport, validate_chain
from gridends.prime_ends.classify import EndClassReport, classify_end
from gridends.grids.ops import ball, components, frame_cells
from gridends.mazurkiewicz.bracket import join_radius_field


@dataclass(frozen=True)
class FiniteConnectivityReport:
    """Per-radius component counts and covering checks at an anchor."""

    radii: tuple[float, ...]
    component_counts: tuple[int, ...]
    touching_counts: tuple[int, ...]
    covered: tuple[bool, ...]
    verdict: bool


def finite_connectivity_check(
    domain: GridDomain, anchor: BoundaryAnchor, radii
) -> FiniteConnectivityReport:
    """Check finite connectedness of the boundary at the anchor.

    For each radius r, components of B(anchor, r) within the domain are
    counted, those within the incidence radius of the anchor are the
    touching ones, and the covering condition asks for some tested radius
    rho <= r whose nonempty ball lies inside the union of the touching
    components. The verdict requires at least one touching component and
    a successful covering at every tested radius.
    """
    radii = tuple(sorted(float(r) for r in radii))
    point = np.asarray(anchor.point, dtype=float)
    counts = []
    touching_counts = []
    covered_flags = []
    balls = {
        r: ball(domain, (float(point[0]), float(point[1])), r) for r in radii
    }
    for r in radii:
        parts = components(domain, balls[r])
        touching = []
        for part in parts:
            d = np.linalg.norm(part.centers() - point, axis=1)
            if d.min() <= anchor.incidence_radius + 1e-12:
                touching.append(part)
        counts.append(len(parts))
        touching_counts.append(len(touching))
        union_ids = (
            np.unique(np.concatenate([t.ids for t in touching]))
            if touching
            else np.empty(0, dtype=np.int64)
        )
        ok = False
        for rho in radii:
            if rho > r:
                break
            b = balls[rho]
            if b.is_empty:
                continue
            if np.isin(b.ids, union_ids, assume_unique=True).all():
                ok = True
                break
        covered_flags.append(ok)
    verdict = all(t >= 1 for t in touching_counts) and all(covered_flags)
    return FiniteConnectivityReport(
        radii=radii,
        component_counts=tuple(counts),
        touching_counts=tuple(touching_counts),
        covered=tuple(covered_flags),
        verdict=verdict,
    )


@dataclass(frozen=True, eq=False)
class GrowthWitnessReport:
    """Separated-chain count used as a compactness stress indicator."""

    radii: tuple[float, ...]
    chains: tuple[Chain, ...]
    kept: tuple[int, ...]
    separation: float

    @property
    def separated_count(self) -> int:
        return len(self.kept)


def growth_witness(
    domain: GridDomain,
    anchor: BoundaryAnchor,
    radii,
    separation: float,
) -> GrowthWitnessReport:
    """Count strongly separated chains through the anchor's ball ladder.

    Unlike the anchored scale tree, every component of every ball is kept:
    the witness counts distinct approach channels near the anchor even
    when they stay clear of the anchor point itself. One chain is formed
    per deepest-level component by walking containment upward, and a chain
    counts when it validates with every consecutive-link separation
    certified at or above the given bound; the radius ladder therefore
    needs gaps comfortably above it. A count growing across truncations of
    a domain family witnesses boundary behavior that no compact end
    structure supports.
    """
    point = (float(anchor.point[0]), float(anchor.point[1]))
    radii = tuple(sorted((float(r) for r in radii), reverse=True))
    levels: list[list[Region]] = []
    for r in radii:
        b = ball(domain, point, r)
        levels.append([] if b.is_empty else components(domain, b))

    depth = len(radii) - 1
    chains: list[Chain] = []
    for deep in levels[-1]:
        links = [deep]
        for level in range(depth - 1, -1, -1):
            first = int(links[-1].ids[0])
            parent = next(
                (
                    cand
                    for cand in levels[level]
                    if np.isin(first, cand.ids, assume_unique=True)
                ),
                None,
            )
            if parent is None:
                break
            links.append(parent)
        if len(links) != depth + 1:
            continue
        chain = Chain(domain=domain, links=tuple(reversed(links)), radii=radii)
        chains.append(replace(chain, report=validate_chain(domain, chain)))

    kept = tuple(
        i
        for i, chain in enumerate(chains)
        if chain.report is not None
        and chain.report.valid
        and all(s.lower >= separation for s in chain.report.separations)
    )
    return GrowthWitnessReport(
        radii=radii,
        chains=tuple(chains),
        kept=kept,
        separation=float(separation),
    )


@dataclass(frozen=True, eq=False)
class EndAtInfinity:
    """One end at infinity: its chain, validation, and classification."""

    chain: Chain
    validation: ChainReport
    classification: EndClassReport


@dataclass(frozen=True, eq=False)
class EndsAtInfinityReport:
    """Ends at infinity found from one basepoint and radius ladder."""

    radii: tuple[float, ...]
    ends: tuple[EndAtInfinity, ...]

    @property
    def count(self) -> int:
        return len(self.ends)


def ends_at_infinity(
    domain: GridDomain, basepoint, radii
) -> EndsAtInfinityReport:
    """Find ends at infinity as stable unbounded complement components.

    For each radius R of the ascending ladder, the sublevel set of the
    join-radius field around the basepoint is removed and the remaining
    components of the basepoint's domain component that touch a clipped
    window side are kept. Components surviving the whole ladder in nested
    fashion form chains, which are validated and classified (kind C).
    """
    radii = tuple(sorted(float(r) for r in radii))
    rho = join_radius_field(domain, basepoint)
    ids = domain.inside_ids
    reachable = np.isfinite(rho)
    clipped = frame_cells(domain)

    per_radius: list[list[Region]] = []
    for r in radii:
        keep = ids[reachable & (rho > r)]
        if keep.size == 0:
            per_radius.append([])
            continue
        outside = Region(domain, keep)
        unbounded = [
            part
            for part in components(domain, outside)
            if part.intersects(clipped)
        ]
        per_radius.append(unbounded)

    ends = []
    if per_radius and per_radius[-1]:
        for deep in per_radius[-1]:
            links: list[Region] = [deep]
            ok = True
            first = int(deep.ids[0])
            for level in range(len(radii) - 2, -1, -1):
                parent = None
                for cand in per_radius[level]:
                    pos = int(np.searchsorted(cand.ids, first))
                    if pos < len(cand.ids) and int(cand.ids[pos]) == first:
                        parent = cand
                        break
                if parent is None:
                    ok = False
                    break
                links.append(parent)
            if not ok:
                continue
            chain = Chain(
                domain=domain,
                links=tuple(reversed(links)),
                radii=radii,
            )
            validation = validate_chain(domain, chain)
            classification = classify_end(domain, chain, strict=False)
            ends.append(
                EndAtInfinity(
                    chain=chain,
                    validation=validation,
                    classification=classification,
                )
            )
    return EndsAtInfinityReport(radii=radii, ends=tuple(ends))
