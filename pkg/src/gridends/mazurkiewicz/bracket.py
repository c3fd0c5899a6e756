"""Certified two-sided estimates of Mazurkiewicz distances.

For two cells x, y the estimator binary-searches the smallest d at which x
and y are 4-connected inside the lens {c : max(|c-x|, |c-y|) <= d}. Any
path containing both cells lies inside the lens of its own diameter, so the
threshold is a true lower bound; a shortest path extracted from the
threshold lens consists of cells within the threshold of both endpoints, so
its diameter is at most twice the lower bound. The pair (threshold, witness
diameter) is therefore a certified bracket with bounded ratio.

The set version replaces the two center distances by distances to the two
regions. The resulting threshold is still a true lower bound, but the
witness path's diameter is no longer controlled by it, so when the raw
bracket is loose the estimator refines the upper bound by point brackets
between nearby boundary cells of the two regions (the set distance equals
the minimum of point distances over pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from gridends.errors import BadParams
from gridends.grids.domain import GridDomain, Region
from gridends.grids.ops import (
    diameter,
    inner_boundary,
    label_mask,
    shortest_path,
)
from gridends.mazurkiewicz.oracle import _as_id

_PAIR_BUDGET = 128


@dataclass(frozen=True)
class IntervalEstimate:
    """Certified bracket lower <= value <= upper, with an optional witness.

    The witness, when present, is the flat cell ids of a connected path
    whose diameter realizes the upper bound.
    """

    lower: float
    upper: float
    spacing: float
    witness: NDArray[np.int64] | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper + 1e-12):
            raise BadParams(
                f"invalid bracket [{self.lower}, {self.upper}]"
            )

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.lower)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower - 1e-12 <= value <= self.upper + 1e-12


def _connected_at(
    key_grid: NDArray[np.float64],
    v: float,
    a_pos: NDArray[np.int64],
    b_pos: NDArray[np.int64],
) -> bool:
    labels, count = label_mask(key_grid <= v)
    if count == 0:
        return False
    flat = labels.ravel()
    la = np.unique(flat[a_pos])
    lb = np.unique(flat[b_pos])
    la = la[la > 0]
    lb = lb[lb > 0]
    return bool(np.intersect1d(la, lb).size)


def _search_threshold(
    key_grid: NDArray[np.float64],
    candidates: NDArray[np.float64],
    a_pos: NDArray[np.int64],
    b_pos: NDArray[np.int64],
) -> float:
    """Smallest candidate value whose sublevel lens joins a to b."""
    lo, hi = 0, len(candidates) - 1
    if _connected_at(key_grid, candidates[lo], a_pos, b_pos):
        return float(candidates[lo])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _connected_at(key_grid, candidates[mid], a_pos, b_pos):
            hi = mid
        else:
            lo = mid
    return float(candidates[hi])


def _key_grid(domain: GridDomain, key: NDArray[np.float64]) -> NDArray[np.float64]:
    grid = np.full(domain.nx * domain.ny, np.inf)
    grid[domain.inside_ids] = key
    return grid.reshape(domain.nx, domain.ny)


def mazurkiewicz_distance(
    domain: GridDomain, x, y, witness: bool = True
) -> IntervalEstimate:
    """Certified bracket of the Mazurkiewicz distance between two cells.

    Guarantees lower <= d <= upper and upper <= 2 * lower, where d is the
    minimal diameter of a connected cell path containing both cells. Cells
    in different components give an infinite bracket. With witness=False
    the path extraction is skipped and the upper bound falls back to twice
    the threshold, which some shortest path in the threshold lens always
    achieves.
    """
    xi = _as_id(domain, x)
    yi = _as_id(domain, y)
    h = domain.spacing
    if xi == yi:
        return IntervalEstimate(0.0, 0.0, h, np.array([xi], dtype=np.int64))
    flat_labels = domain.labels.ravel()
    if flat_labels[xi] != flat_labels[yi] or flat_labels[xi] == 0:
        return IntervalEstimate(math.inf, math.inf, h)

    centers = domain.centers_of(domain.inside_ids)
    px = domain.centers_of(np.array([xi], dtype=np.int64))[0]
    py = domain.centers_of(np.array([yi], dtype=np.int64))[0]
    key = np.maximum(
        np.linalg.norm(centers - px, axis=1),
        np.linalg.norm(centers - py, axis=1),
    )
    grid = _key_grid(domain, key)
    a_pos = np.array([xi], dtype=np.int64)
    b_pos = np.array([yi], dtype=np.int64)
    d_x = float(np.linalg.norm(px - py))
    candidates = np.unique(key[key >= d_x - 1e-12])
    v = _search_threshold(grid, candidates, a_pos, b_pos)
    if not witness:
        return IntervalEstimate(v, 2.0 * v, h)
    path = shortest_path(grid <= v, a_pos, b_pos)
    assert path is not None
    upper = diameter(domain, Region(domain, np.sort(path)))
    return IntervalEstimate(v, upper, h, path)


def _local_pair_upper(
    domain: GridDomain,
    pa: NDArray[np.float64],
    pb: NDArray[np.float64],
    ia: int,
    ib: int,
    radius: float,
) -> tuple[float, NDArray[np.int64]] | None:
    """Witness-path diameter for a cell pair, searched in a cropped box.

    The crop can only miss better far-ranging paths, so the returned
    diameter is a valid (possibly loose) upper bound; None means the pair
    is not joined within the crop.
    """
    h = domain.spacing
    x0, y0, _, _ = domain.window
    lo = np.minimum(pa, pb) - radius - 2 * h
    hi = np.maximum(pa, pb) + radius + 2 * h
    ix0 = max(0, int((lo[0] - x0) / h))
    iy0 = max(0, int((lo[1] - y0) / h))
    ix1 = min(domain.nx, int(np.ceil((hi[0] - x0) / h)) + 1)
    iy1 = min(domain.ny, int(np.ceil((hi[1] - y0) / h)) + 1)
    sub = domain.inside[ix0:ix1, iy0:iy1]
    ny_sub = iy1 - iy0
    xs = x0 + (np.arange(ix0, ix1) + 0.5) * h
    ys = y0 + (np.arange(iy0, iy1) + 0.5) * h
    cx, cy = np.meshgrid(xs, ys, indexing="ij")
    key = np.maximum(
        np.hypot(cx - pa[0], cy - pa[1]), np.hypot(cx - pb[0], cy - pb[1])
    )
    key[~sub] = np.inf

    def local(ids: int) -> int:
        ix, iy = divmod(ids, domain.ny)
        return (ix - ix0) * ny_sub + (iy - iy0)

    a_pos = np.array([local(ia)], dtype=np.int64)
    b_pos = np.array([local(ib)], dtype=np.int64)
    d_x = float(np.linalg.norm(pa - pb))
    finite = key[np.isfinite(key)]
    cand = np.unique(finite[(finite >= d_x - 1e-12) & (finite <= radius + 1e-12)])
    if cand.size == 0 or not _connected_at(key, cand[-1], a_pos, b_pos):
        return None
    v = _search_threshold(key, cand, a_pos, b_pos)
    path = shortest_path(key <= v, a_pos, b_pos)
    if path is None:
        return None
    sx, sy = np.divmod(path, ny_sub)
    full = (sx + ix0) * domain.ny + (sy + iy0)
    pts = domain.centers_of(np.sort(full))
    if len(pts) <= 1:
        return 0.0, full
    d = float(
        np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)).max()
    )
    return d, full


def mazurkiewicz_set_distance(
    domain: GridDomain, a: Region, b: Region
) -> IntervalEstimate:
    """Certified bracket of the Mazurkiewicz distance between two regions.

    The distance is the least diameter of a connected cell set meeting both
    regions; it is zero when they share a cell and infinite when no
    component of the domain meets both.
    """
    h = domain.spacing
    if a.is_empty or b.is_empty:
        return IntervalEstimate(math.inf, math.inf, h)
    if a.intersects(b):
        shared = np.intersect1d(a.ids, b.ids, assume_unique=True)[:1]
        return IntervalEstimate(0.0, 0.0, h, shared)
    flat_labels = domain.labels.ravel()
    la = np.unique(flat_labels[a.ids])
    lb = np.unique(flat_labels[b.ids])
    common = np.intersect1d(la[la > 0], lb[lb > 0])
    if common.size == 0:
        return IntervalEstimate(math.inf, math.inf, h)

    centers = domain.centers_of(domain.inside_ids)
    da = cKDTree(a.centers()).query(centers)[0]
    db = cKDTree(b.centers()).query(centers)[0]
    key = np.maximum(da, db)
    grid = _key_grid(domain, key)
    v = _search_threshold(grid, np.unique(key), a.ids, b.ids)
    mask = grid <= v
    flat_mask = mask.ravel()
    path = shortest_path(
        mask, a.ids[flat_mask[a.ids]], b.ids[flat_mask[b.ids]]
    )
    assert path is not None
    upper = diameter(domain, Region(domain, np.sort(path)))
    witness = path

    if upper > 2 * v + 4 * h:
        # Refine: the set distance is the minimum of point distances over
        # pairs, and each pair's witness diameter is a valid upper bound.
        ba = inner_boundary(domain, a)
        bb = inner_boundary(domain, b)
        a_ids = ba.ids if not ba.is_empty else a.ids
        b_ids = bb.ids if not bb.is_empty else b.ids
        pa = domain.centers_of(a_ids)
        pb = domain.centers_of(b_ids)
        sparse = cKDTree(pa).sparse_distance_matrix(
            cKDTree(pb), max_distance=upper, output_type="coo_matrix"
        )
        order = np.argsort(sparse.data, kind="stable")[:_PAIR_BUDGET]
        for k in order:
            if sparse.data[k] > upper:
                continue
            ia = int(a_ids[sparse.row[k]])
            ib = int(b_ids[sparse.col[k]])
            got = _local_pair_upper(
                domain,
                domain.centers_of(np.array([ia]))[0],
                domain.centers_of(np.array([ib]))[0],
                ia,
                ib,
                upper,
            )
            if got is not None and got[0] < upper:
                upper, witness = got
            if upper <= 2 * v + 4 * h:
                break
    return IntervalEstimate(v, max(v, upper), h, witness)


def join_radius_field(domain: GridDomain, basepoint) -> NDArray[np.float64]:
    """Radius at which each cell first joins the basepoint's component.

    Cells are inserted in order of center distance r from the basepoint and
    merged with inserted neighbors; a cell's value is the r at which its
    growing component first contains the basepoint. Every connected set
    containing the basepoint and a cell lies in the ball of its own
    diameter around the basepoint, so the field is a lower bound for the
    Mazurkiewicz distance from the basepoint, and joining within the ball
    of radius r gives a path of diameter at most 2r: field <= d_M <=
    2 * field, cellwise.

    Returns values aligned with domain.inside_ids; unreachable cells get
    inf.
    """
    ids = domain.inside_ids
    n = ids.size
    if isinstance(basepoint, (int, np.integer)) or (
        isinstance(basepoint, tuple) and isinstance(basepoint[0], (int, np.integer))
    ):
        base_id = _as_id(domain, basepoint)
        p0 = domain.centers_of(np.array([base_id], dtype=np.int64))[0]
    else:
        p0 = np.asarray(basepoint, dtype=float)
        base_id = int(ids[np.argmin(np.linalg.norm(domain.centers_of(ids) - p0, axis=1))])
    key = np.linalg.norm(domain.centers_of(ids) - p0, axis=1)
    order = np.argsort(key, kind="stable")

    index = np.full(domain.nx * domain.ny, -1, dtype=np.int64)
    index[ids] = np.arange(n)
    base_node = int(index[base_id])

    parent = np.arange(n, dtype=np.int64)
    rank = np.zeros(n, dtype=np.int8)
    added = np.zeros(n, dtype=bool)
    has_base = np.zeros(n, dtype=bool)
    pending: list[list[int]] = [[] for _ in range(n)]
    out = np.full(n, np.inf)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = int(parent[i])
        return i

    ny = domain.ny
    for node in order:
        node = int(node)
        r = float(key[node])
        added[node] = True
        if node == base_node:
            has_base[node] = True
            out[node] = 0.0
        else:
            pending[node].append(node)
        v = int(ids[node])
        iy = v % ny
        for w in (v - ny, v + ny, v - 1, v + 1):
            if w == v - 1 and iy == 0:
                continue
            if w == v + 1 and iy == ny - 1:
                continue
            if 0 <= w < index.size and index[w] >= 0 and added[index[w]]:
                r1, r2 = find(node), find(int(index[w]))
                if r1 == r2:
                    continue
                if rank[r1] < rank[r2]:
                    r1, r2 = r2, r1
                # r2 merges into r1
                if has_base[r1] and not has_base[r2]:
                    for c in pending[r2]:
                        out[c] = r
                    pending[r2] = []
                elif has_base[r2] and not has_base[r1]:
                    for c in pending[r1]:
                        out[c] = r
                    pending[r1] = []
                parent[r2] = r1
                has_base[r1] = has_base[r1] or has_base[r2]
                if not has_base[r1]:
                    pending[r1].extend(pending[r2])
                    pending[r2] = []
                if rank[r1] == rank[r2]:
                    rank[r1] += 1
    return out
