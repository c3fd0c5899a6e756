"""Region operations on rasterized domains.

Connectivity is always 4-neighbor. Distances between cells are Euclidean
distances between cell centers. Components are ordered by their smallest
flat cell id so that every enumeration is deterministic.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage, sparse
from scipy.sparse import csgraph
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import cdist

from gridends.errors import EmptyRegion
from gridends.grids.domain import CROSS, SIDES, GridDomain, Region

_DIRECT_DIAMETER_CAP = 2048

NORTH_POLE = np.array([0.0, 0.0, 1.0])


def neighbor_any(mask: NDArray[np.bool_]) -> NDArray[np.bool_]:
    """Cells with at least one 4-neighbor inside the given mask."""
    out = np.zeros_like(mask)
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def label_mask(mask: NDArray[np.bool_]) -> tuple[NDArray[np.int32], int]:
    """4-connected component labels of a boolean mask."""
    labels, count = ndimage.label(mask, structure=CROSS)
    return labels, int(count)


def count_components(mask: NDArray[np.bool_]) -> int:
    return label_mask(mask)[1]


def same_component(
    mask: NDArray[np.bool_], a: NDArray[np.int64], b: NDArray[np.int64]
) -> bool:
    """Whether some cell of a and some cell of b share a component of mask."""
    if a.size == 0 or b.size == 0:
        return False
    labels, count = label_mask(mask)
    if count == 0:
        return False
    flat = labels.ravel()
    la = np.unique(flat[a])
    lb = np.unique(flat[b])
    la = la[la > 0]
    lb = lb[lb > 0]
    return bool(np.intersect1d(la, lb, assume_unique=True).size)


def components(domain: GridDomain, region: Region | None = None) -> list[Region]:
    """Connected components, ordered by smallest member cell id."""
    mask = domain.inside if region is None else region.mask()
    labels, count = label_mask(mask)
    if count == 0:
        return []
    flat = labels.ravel()
    ids = np.flatnonzero(flat).astype(np.int64)
    order = np.argsort(flat[ids], kind="stable")
    ids = ids[order]
    bounds = np.searchsorted(flat[ids], np.arange(1, count + 2))
    parts = [
        Region(domain, np.sort(ids[bounds[i] : bounds[i + 1]]))
        for i in range(count)
    ]
    parts.sort(key=lambda r: int(r.ids[0]))
    return parts


def component_containing(
    domain: GridDomain, cell_id: int, region: Region | None = None
) -> Region | None:
    """The component of the region holding the given cell, if any."""
    mask = domain.inside if region is None else region.mask()
    labels, _ = label_mask(mask)
    target = labels.ravel()[cell_id]
    if target == 0:
        return None
    return Region.from_mask(domain, labels == target)


def ball(domain: GridDomain, center: tuple[float, float], radius: float) -> Region:
    """Cells whose centers lie within the closed disk around a point."""
    ids = domain.inside_ids
    d = domain.centers_of(ids) - np.asarray(center, dtype=float)
    keep = np.einsum("ij,ij->i", d, d) <= radius * radius
    return Region(domain, ids[keep])


def points_diameter(pts: NDArray[np.float64]) -> float:
    """Largest pairwise Euclidean distance in a point cloud."""
    if len(pts) <= 1:
        return 0.0
    if len(pts) <= _DIRECT_DIAMETER_CAP:
        return float(cdist(pts, pts).max())
    try:
        hull = pts[ConvexHull(pts).vertices]
        return float(cdist(hull, hull).max())
    except QhullError:
        # Collinear cloud: extremes along the principal direction.
        d = pts - pts.mean(axis=0)
        _, _, vt = np.linalg.svd(d, full_matrices=False)
        t = d @ vt[0]
        return float(np.linalg.norm(pts[np.argmax(t)] - pts[np.argmin(t)]))


def diameter(domain: GridDomain, region: Region) -> float:
    """Largest Euclidean distance between two cell centers of the region."""
    if region.is_empty:
        raise EmptyRegion("diameter of an empty region")
    return points_diameter(region.centers())


def inner_boundary(domain: GridDomain, region: Region) -> Region:
    """Cells of the region with a 4-neighbor in the domain outside it.

    Adjacency to removed obstacle cells or to the window frame does not
    count: this is the boundary relative to the domain, the grid version of
    the part of the region's topological boundary that stays inside.
    """
    r = region.mask()
    return Region.from_mask(domain, r & neighbor_any(domain.inside & ~r))


def interior_within(domain: GridDomain, region: Region) -> Region:
    """Cells of the region with no domain neighbor outside it."""
    r = region.mask()
    return Region.from_mask(domain, r & ~neighbor_any(domain.inside & ~r))


def dilate(domain: GridDomain, region: Region, steps: int = 1) -> Region:
    """Region together with its k-step 4-neighborhood inside the domain."""
    m = region.mask()
    for _ in range(steps):
        m = (m | neighbor_any(m)) & domain.inside
    return Region.from_mask(domain, m)


def boundary_collar(domain: GridDomain) -> Region:
    """Inside cells 4-adjacent to the true boundary.

    True boundary means removed or excluded cells inside the window, or the
    region beyond a window side that is not a truncation clip. Clipped sides
    are continuation artifacts and do not contribute.
    """
    blocked = ~domain.inside
    adj = neighbor_any(blocked)
    if "left" not in domain.clipped_sides:
        adj[0, :] = True
    if "right" not in domain.clipped_sides:
        adj[-1, :] = True
    if "bottom" not in domain.clipped_sides:
        adj[:, 0] = True
    if "top" not in domain.clipped_sides:
        adj[:, -1] = True
    return Region.from_mask(domain, domain.inside & adj)


def frame_mask(
    domain: GridDomain, sides: frozenset[str] | None = None
) -> NDArray[np.bool_]:
    """Lattice mask of the window frame for the given sides (default: clipped).

    Covers the outermost cell row or column whether or not the cells are
    inside the domain.
    """
    sides = domain.clipped_sides if sides is None else sides
    m = np.zeros_like(domain.inside)
    if "left" in sides:
        m[0, :] = True
    if "right" in sides:
        m[-1, :] = True
    if "bottom" in sides:
        m[:, 0] = True
    if "top" in sides:
        m[:, -1] = True
    return m


def frame_cells(domain: GridDomain, sides: frozenset[str] | None = None) -> Region:
    """Inside cells on the window frame for the given sides (default: clipped)."""
    return Region.from_mask(domain, domain.inside & frame_mask(domain, sides))


def grid_graph(
    mask: NDArray[np.bool_],
) -> tuple[NDArray[np.int64], sparse.csr_matrix]:
    """Node ids (flat, sorted) and symmetric adjacency of a mask's cells."""
    nx, ny = mask.shape
    ids = np.flatnonzero(mask.ravel()).astype(np.int64)
    n = ids.size
    index = np.full(nx * ny, -1, dtype=np.int64)
    index[ids] = np.arange(n)
    rows = []
    cols = []
    right = mask[:-1, :] & mask[1:, :]
    a = np.flatnonzero(np.pad(right, ((0, 1), (0, 0))).ravel())
    rows.append(index[a])
    cols.append(index[a + ny])
    up = mask[:, :-1] & mask[:, 1:]
    a = np.flatnonzero(np.pad(up, ((0, 0), (0, 1))).ravel())
    rows.append(index[a])
    cols.append(index[a + 1])
    r = np.concatenate(rows + cols)
    c = np.concatenate(cols + rows)
    adj = sparse.csr_matrix(
        (np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n)
    )
    return ids, adj


def shortest_path(
    mask: NDArray[np.bool_],
    sources: NDArray[np.int64],
    targets: NDArray[np.int64],
) -> NDArray[np.int64] | None:
    """A minimum-hop 4-path inside the mask from sources to targets.

    Returns flat cell ids from a source to a target inclusive, or None when
    no target is reachable.
    """
    sources = np.asarray(sources, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    if sources.size == 0 or targets.size == 0:
        return None
    flat_mask = mask.ravel()
    if not flat_mask[sources].all() or not flat_mask[targets].all():
        raise ValueError("sources and targets must lie inside the mask")
    ids, adj = grid_graph(mask)
    index = np.full(mask.size, -1, dtype=np.int64)
    index[ids] = np.arange(ids.size)
    dist, pred, _ = csgraph.dijkstra(
        adj,
        unweighted=True,
        indices=index[sources],
        min_only=True,
        return_predecessors=True,
    )
    tnodes = index[targets]
    best = tnodes[np.argmin(dist[tnodes])]
    if not np.isfinite(dist[best]):
        return None
    path = [best]
    while pred[path[-1]] >= 0:
        path.append(pred[path[-1]])
    return ids[np.array(path[::-1], dtype=np.int64)]


def stereographic_project(points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Map plane points onto the unit sphere, origin to the south pole."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    s = np.einsum("ij,ij->i", pts, pts)
    out = np.empty((len(pts), 3))
    out[:, 0] = 2.0 * pts[:, 0]
    out[:, 1] = 2.0 * pts[:, 1]
    out[:, 2] = s - 1.0
    out /= (s + 1.0)[:, None]
    return out


def chordal_distance(
    a: NDArray[np.float64], b: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Straight-line distance between plane points seen on the sphere."""
    pa = stereographic_project(a)
    pb = stereographic_project(b)
    return np.linalg.norm(pa - pb, axis=-1)


def chordal_to_infinity(points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Chordal distance from plane points to the point at infinity."""
    return np.linalg.norm(stereographic_project(points) - NORTH_POLE, axis=-1)
