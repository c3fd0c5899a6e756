"""Random and adversarial continuum pairs for distortion sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from gridends.errors import BadParams
from gridends.grids.domain import GridDomain, Region
from gridends.grids.ops import (
    count_components,
    diameter,
    dilate,
    frame_mask,
    neighbor_any,
    shortest_path,
)

MODES = ("intersecting", "disjoint")
_TRIES = 60


@dataclass(frozen=True, eq=False)
class ContinuumPair:
    """Two connected cell regions with their measured diameters.

    sizes holds (diam E, diam F) at creation; envelope passes append the
    image diameters, giving (diam E, diam F, diam fE, diam fF).
    """

    e: Region
    f: Region
    intersecting: bool
    sizes: tuple[float, ...]

    def __post_init__(self) -> None:
        if count_components(self.e.mask()) != 1:
            raise BadParams("first continuum is not connected")
        if count_components(self.f.mask()) != 1:
            raise BadParams("second continuum is not connected")
        meets = self.e.intersects(self.f)
        if self.intersecting and not meets:
            raise BadParams("pair marked intersecting but sets are disjoint")
        if not self.intersecting and meets:
            raise BadParams("pair marked disjoint but sets meet")


def _grow(
    domain: GridDomain,
    rng: np.random.Generator,
    seed_cell: int,
    target: float,
    blocked: NDArray[np.bool_] | None,
) -> Region | None:
    """Randomized spanning-tree growth from a cell to a target diameter.

    Adds one random frontier cell at a time and stops once the bounding
    box diagonal reaches the target; returns None when growth starves
    first. The bounding box bound never overstates the diameter.
    """
    ny = domain.ny
    h = domain.spacing
    allowed = domain.inside if blocked is None else domain.inside & ~blocked
    ix, iy = divmod(int(seed_cell), ny)
    if not allowed[ix, iy]:
        return None
    taken = np.zeros_like(domain.inside)
    taken[ix, iy] = True
    cells = [(ix, iy)]
    frontier = [(ix, iy)]
    lo = [ix, iy]
    hi = [ix, iy]
    while np.hypot(hi[0] - lo[0], hi[1] - lo[1]) * h < target:
        while frontier:
            pick = int(rng.integers(len(frontier)))
            cx, cy = frontier[pick]
            options = [
                (jx, jy)
                for jx, jy in (
                    (cx + 1, cy),
                    (cx - 1, cy),
                    (cx, cy + 1),
                    (cx, cy - 1),
                )
                if 0 <= jx < domain.nx
                and 0 <= jy < ny
                and allowed[jx, jy]
                and not taken[jx, jy]
            ]
            if options:
                break
            frontier[pick] = frontier[-1]
            frontier.pop()
        else:
            return None
        jx, jy = options[int(rng.integers(len(options)))]
        taken[jx, jy] = True
        cells.append((jx, jy))
        frontier.append((jx, jy))
        lo = [min(lo[0], jx), min(lo[1], jy)]
        hi = [max(hi[0], jx), max(hi[1], jy)]
    return Region.from_cells(domain, np.array(cells, dtype=np.int64))


def _straddle_cells(domain: GridDomain) -> NDArray[np.int64]:
    """Removed cells with inside cells on two opposite sides."""
    inside = domain.inside
    blocked = ~inside & ~frame_mask(domain)
    vert = np.zeros_like(inside)
    vert[:, 1:-1] = blocked[:, 1:-1] & inside[:, 2:] & inside[:, :-2]
    horiz = np.zeros_like(inside)
    horiz[1:-1, :] = blocked[1:-1, :] & inside[2:, :] & inside[:-2, :]
    return domain.ids_of_cells(np.argwhere(vert | horiz))


def _straddle_seeds(
    domain: GridDomain, rng: np.random.Generator, straddle: NDArray[np.int64]
) -> tuple[int, int]:
    """Inside cells facing each other across a random straddled obstacle."""
    cell = int(straddle[int(rng.integers(len(straddle)))])
    ix, iy = divmod(cell, domain.ny)
    if (
        0 < iy < domain.ny - 1
        and domain.inside[ix, iy + 1]
        and domain.inside[ix, iy - 1]
    ):
        return ix * domain.ny + iy + 1, ix * domain.ny + iy - 1
    return (ix + 1) * domain.ny + iy, (ix - 1) * domain.ny + iy


def sample_continuum_pairs(
    domain: GridDomain,
    n: int,
    mode: str,
    scale_range: tuple[float, float],
    seed: int,
) -> list[ContinuumPair]:
    """Random connected pairs with diameters spanning a scale range.

    Pairs are tree-grown random regions; undersized growths (below the
    4h nondegeneracy floor or stunted far short of their drawn target)
    are rejected and regrown. When the domain has internal obstacles,
    every fifth pair straddles one: the two regions hug opposite sides,
    joined through a connecting path in intersecting mode. Deterministic
    under the seed.
    """
    if n < 1:
        raise BadParams("need at least one pair")
    if mode not in MODES:
        raise BadParams(f"mode must be one of {MODES}")
    lo, hi = scale_range
    if not (0 < lo <= hi):
        raise BadParams("scale range must satisfy 0 < lo <= hi")
    h = domain.spacing
    floor = 4.0 * h
    lo = max(lo, 5.0 * h)
    hi = max(hi, lo)
    rng = np.random.default_rng(seed)
    ids = domain.inside_ids
    straddle = _straddle_cells(domain)
    pairs: list[ContinuumPair] = []
    while len(pairs) < n:
        adversarial = len(straddle) > 0 and len(pairs) % 5 == 4
        for _ in range(_TRIES):
            te, tf = np.exp(rng.uniform(np.log(lo), np.log(hi), size=2))
            if adversarial:
                seed_e, seed_f = _straddle_seeds(domain, rng, straddle)
            else:
                seed_e = int(ids[int(rng.integers(len(ids)))])
            first = _grow(domain, rng, seed_e, te, None)
            if first is None or diameter(domain, first) < max(floor, 0.5 * te):
                continue
            if mode == "intersecting" and not adversarial:
                seed_f = int(first.ids[int(rng.integers(len(first.ids)))])
                second = _grow(domain, rng, seed_f, tf, None)
            elif mode == "intersecting":
                second = _grow(domain, rng, seed_f, tf, None)
                if second is not None and not second.intersects(first):
                    bridge = shortest_path(domain.inside, second.ids, first.ids)
                    if bridge is None:
                        continue
                    second = second.union(Region(domain, bridge))
            else:
                blocked = dilate(domain, first).mask()
                if adversarial:
                    bx, by = divmod(seed_f, domain.ny)
                    if blocked[bx, by]:
                        continue
                else:
                    open_ids = ids[~blocked.ravel()[ids]]
                    if len(open_ids) == 0:
                        continue
                    seed_f = int(open_ids[int(rng.integers(len(open_ids)))])
                second = _grow(domain, rng, seed_f, tf, blocked)
            if second is None or diameter(domain, second) < max(
                floor, 0.5 * tf
            ):
                continue
            pairs.append(
                ContinuumPair(
                    e=first,
                    f=second,
                    intersecting=mode == "intersecting",
                    sizes=(diameter(domain, first), diameter(domain, second)),
                )
            )
            break
        else:
            raise BadParams(
                "could not grow a nondegenerate pair at this scale range"
            )
    return pairs
