"""Geometric quasiconformality: modulus ratios across a pushforward."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from gridends.errors import BadParams
from gridends.grids.domain import GridDomain, Region
from gridends.grids.ops import shortest_path
from gridends.maps.specs import Correspondence, MapSpec
from gridends.modulus.solver import CurveFamilySpec, solve_family

_BOX_TRIES = 80


@dataclass(frozen=True, eq=False)
class DistortionBracket:
    """Modulus ratios source/image over a batch of curve families."""

    p: float
    ratios: tuple[float, ...]
    low: float
    high: float


def push_curve(
    corr: Correspondence, curve: NDArray[np.int64]
) -> NDArray[np.int64] | None:
    """Image cell path of a source cell curve, re-bridged where needed.

    Maps each cell through the correspondence, drops cells landing in
    the removed boundary band, merges duplicates, and stitches the
    remaining gaps with shortest paths in the image. Returns None when
    the image cells cannot be joined into one path.
    """
    idx = np.searchsorted(corr.source.inside_ids, curve)
    cells = corr.cell_map[idx]
    cells = cells[corr.image.inside.ravel()[cells]]
    if len(cells) == 0:
        return None
    keep = np.r_[True, cells[1:] != cells[:-1]]
    cells = cells[keep]
    ny = corr.image.ny
    pieces = [cells[:1]]
    for a, b in zip(cells[:-1], cells[1:]):
        ax, ay = divmod(int(a), ny)
        bx, by = divmod(int(b), ny)
        if abs(ax - bx) + abs(ay - by) == 1:
            pieces.append(np.array([b], dtype=np.int64))
            continue
        bridge = shortest_path(
            corr.image.inside, np.array([a]), np.array([b])
        )
        if bridge is None:
            return None
        pieces.append(bridge[1:])
    return np.concatenate(pieces)


def qc_distortion(
    spec: MapSpec,
    corr: Correspondence,
    families: list[CurveFamilySpec],
    p: float = 2.0,
) -> DistortionBracket:
    """Bracket of source-over-image modulus ratios across families.

    Each family is re-solved on the source at the requested exponent,
    its marked sets and curves are pushed through the correspondence, and
    the image modulus is solved warm-started from the pushed curves. A
    family whose image modulus degenerates to zero contributes an
    infinite ratio rather than failing.
    """
    if spec.name != corr.map.name:
        raise BadParams(
            f"correspondence belongs to {corr.map.name}, not {spec.name}"
        )
    if not families:
        raise BadParams("need at least one family")
    ratios = []
    for family in families:
        if family.domain is not corr.source:
            raise BadParams("family was not computed on the source domain")
        _, src = solve_family(
            family.domain, family.e, family.f, p=p, seed_curves=family.curves
        )
        e_img = corr.push_region(family.e)
        f_img = corr.push_region(family.f)
        if e_img.is_empty or f_img.is_empty:
            ratios.append(float("inf"))
            continue
        seeds = tuple(
            pushed
            for curve in family.curves
            if (pushed := push_curve(corr, curve)) is not None
        )
        _, img = solve_family(
            corr.image, e_img, f_img, p=p, seed_curves=seeds
        )
        ratios.append(
            src.value / img.value if img.value > 0 else float("inf")
        )
    return DistortionBracket(
        p=p, ratios=tuple(ratios), low=min(ratios), high=max(ratios)
    )


def box_side_regions(
    domain: GridDomain, box: tuple[float, float, float, float], axis: int = 0
) -> tuple[Region, Region]:
    """Opposite single-cell side bands of an axis-aligned box of cells."""
    x0, y0, x1, y1 = box
    centers = domain.centers_of(domain.inside_ids)
    hit = (
        (centers[:, 0] >= x0)
        & (centers[:, 0] <= x1)
        & (centers[:, 1] >= y0)
        & (centers[:, 1] <= y1)
    )
    ids = domain.inside_ids[hit]
    if len(ids) == 0:
        raise BadParams("box holds no cells")
    cells = domain.cells_of_ids(ids)
    lo = cells[:, axis] == cells[:, axis].min()
    hi = cells[:, axis] == cells[:, axis].max()
    return Region(domain, ids[lo]), Region(domain, ids[hi])


def sample_box_families(
    domain: GridDomain, n: int, seed: int, p: float = 2.0
) -> list[CurveFamilySpec]:
    """Solved side-joining families of random boxes filled by the domain.

    Boxes are rejected until every lattice cell they cover is an inside
    cell and both joined sides hold at least eight cells, so each family
    is a clean rectangle benchmark. Deterministic under the seed.
    """
    if n < 1:
        raise BadParams("need at least one family")
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = domain.window
    centers = domain.centers_of(domain.inside_ids)
    families: list[CurveFamilySpec] = []
    while len(families) < n:
        for _ in range(_BOX_TRIES):
            w = rng.uniform(0.12, 0.4) * min(x1 - x0, y1 - y0)
            aspect = np.exp(rng.uniform(-0.8, 0.8))
            cx = rng.uniform(x0 + w, x1 - w)
            cy = rng.uniform(y0 + w, y1 - w)
            box = (
                cx - w / 2,
                cy - w * aspect / 2,
                cx + w / 2,
                cy + w * aspect / 2,
            )
            hit = (
                (centers[:, 0] >= box[0])
                & (centers[:, 0] <= box[2])
                & (centers[:, 1] >= box[1])
                & (centers[:, 1] <= box[3])
            )
            if not hit.any():
                continue
            cells = domain.cells_of_ids(domain.inside_ids[hit])
            span = cells.max(axis=0) - cells.min(axis=0) + 1
            if span.min() < 8 or hit.sum() != span[0] * span[1]:
                continue
            e, f = box_side_regions(domain, box, axis=int(rng.integers(2)))
            family, _ = solve_family(domain, e, f, p=p)
            families.append(family)
            break
        else:
            raise BadParams("no axis-aligned box fits the domain")
    return families
