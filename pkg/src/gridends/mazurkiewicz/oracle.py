"""Exact minimal path diameter on very small domains.

The Mazurkiewicz distance between two cells of a rasterized domain is the
least possible diameter of a 4-connected cell path containing both. On
domains of up to 64 cells this module computes it exactly by depth-first
search over simple paths with monotone pruning: a path's diameter never
decreases as it grows, so any prefix at least as wide as the best known
answer can be abandoned.
"""

from __future__ import annotations

import math

import numpy as np

from gridends.errors import TooLarge
from gridends.grids.domain import GridDomain
from gridends.grids.ops import components

_MAX_CELLS = 64


def _as_id(domain: GridDomain, cell) -> int:
    if isinstance(cell, (int, np.integer)):
        return int(cell)
    ids = domain.ids_of_cells(np.asarray([cell], dtype=np.int64))
    return int(ids[0])


def brute_force_oracle(domain: GridDomain, x, y) -> float:
    """Exact minimal diameter of a cell path joining x and y.

    Raises TooLarge beyond 64 cells; returns inf when the cells lie in
    different components.
    """
    if domain.n_inside > _MAX_CELLS:
        raise TooLarge(
            f"oracle limited to {_MAX_CELLS} cells, domain has {domain.n_inside}"
        )
    xi = _as_id(domain, x)
    yi = _as_id(domain, y)
    if xi == yi:
        return 0.0

    comp = None
    for part in components(domain):
        if xi in part.ids:
            comp = part
            break
    assert comp is not None
    if yi not in comp.ids:
        return math.inf

    ids = comp.ids
    n = len(ids)
    index = {int(v): k for k, v in enumerate(ids)}
    pts = comp.centers()
    dist = np.sqrt(
        ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    )
    ny = domain.ny
    neighbors: list[list[int]] = []
    for v in ids:
        nbs = [
            index[int(w)]
            for w in (v - ny, v + ny, v - 1, v + 1)
            if int(w) in index
            and not (v % ny == 0 and w == v - 1)
            and not (v % ny == ny - 1 and w == v + 1)
        ]
        neighbors.append(nbs)

    src = index[xi]
    dst = index[yi]
    target = pts[dst]
    for nbs in neighbors:
        nbs.sort(key=lambda k: (float(np.linalg.norm(pts[k] - target)), k))

    # Whole-component diameter is an attainable bound for some path, so
    # start strictly above it and prune non-improving prefixes.
    best = float(dist.max()) * (1 + 1e-12) + 1e-12
    on_path = np.zeros(n, dtype=bool)

    def extend(cell: int, diam: float) -> None:
        nonlocal best
        if cell == dst:
            best = min(best, diam)
            return
        on_path[cell] = True
        for nb in neighbors[cell]:
            if on_path[nb]:
                continue
            # Diameter of the extended set: new cell against every path cell.
            d = max(diam, float(dist[nb][on_path].max()))
            if d < best:
                extend(nb, d)
        on_path[cell] = False

    extend(src, 0.0)
    return best
