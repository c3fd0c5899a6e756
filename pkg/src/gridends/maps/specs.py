"""Named planar homeomorphisms and their cell-level pushforwards."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from gridends.errors import BadParams, DomainViolation, EmptyRegion, TooLarge
from gridends.grids.domain import DomainSpec, GridDomain, Region
from gridends.grids.ops import frame_mask, neighbor_any

MAP_NAMES = (
    "z_squared",
    "angle_doubling",
    "inversion",
    "fold_xy",
    "identity",
    "affine",
)

_CELL_LIMIT = 40_000_000

# Sub-cell sample offsets in units of one spacing: center, edge midpoints,
# and corners, so nine points trace each closed cell.
_OFFSETS = np.array(
    [(dx, dy) for dx in (-0.5, 0.0, 0.5) for dy in (-0.5, 0.0, 0.5)]
)


@dataclass(frozen=True)
class MapSpec:
    """A named planar homeomorphism with numeric parameters.

    Every name maps its declared open source region injectively:
    inversion needs the origin removed, fold_xy and angle_doubling act on
    the open upper half plane, the rest act on the whole plane. Points of
    the region's closure may still be evaluated (boundary rasterization
    relies on it); only points strictly outside are rejected.
    """

    name: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in MAP_NAMES:
            raise BadParams(f"unknown map {self.name!r}")
        if self.name == "affine" and self.params.get("scale", 1.0) == 0.0:
            raise BadParams("affine map needs a nonzero scale")

    def evaluate(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Image coordinates of an (n, 2) array of points.

        Raises DomainViolation at the origin for inversion and strictly
        below the real axis for the half-plane maps.
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        x, y = pts[:, 0], pts[:, 1]
        if self.name == "identity":
            return pts.copy()
        if self.name == "affine":
            s = self.params.get("scale", 1.0)
            shift = (self.params.get("dx", 0.0), self.params.get("dy", 0.0))
            return s * pts + np.asarray(shift)
        if self.name == "z_squared":
            return np.column_stack((x * x - y * y, 2.0 * x * y))
        if self.name == "inversion":
            rr = x * x + y * y
            if (rr < 1e-18).any():
                raise DomainViolation("inversion is undefined at the origin")
            return np.column_stack((x / rr, -y / rr))
        if (y < -1e-12).any():
            raise DomainViolation(
                f"{self.name} needs the closed upper half plane"
            )
        if self.name == "fold_xy":
            return np.column_stack((x * y, y))
        # Angle doubling r e^{i theta} -> r e^{2 i theta}.
        r = np.hypot(x, y)
        theta = 2.0 * np.arctan2(y, x)
        return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


@dataclass(frozen=True, eq=False)
class Correspondence:
    """Pushforward data tying a source grid to its rasterized image grid.

    cell_map sends each source inside cell (in inside_ids order) to the
    flat id of the image cell holding its center's image; that cell can
    sit in the image's removed boundary band when the source cell hugs
    the boundary.
    """

    map: MapSpec
    source: GridDomain
    image: GridDomain
    cell_map: NDArray[np.int64]

    def push_points(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.map.evaluate(points)

    def image_cells_of(self, points: NDArray[np.float64]) -> NDArray[np.int64]:
        """Flat image-cell ids under the image lattice, clipped to range."""
        dom = self.image
        x0, y0, _, _ = dom.window
        h = dom.spacing
        ix = np.clip(((points[:, 0] - x0) / h).astype(np.int64), 0, dom.nx - 1)
        iy = np.clip(((points[:, 1] - y0) / h).astype(np.int64), 0, dom.ny - 1)
        return ix * dom.ny + iy

    def push_region(self, region: Region) -> Region:
        """Image region traced by the nine sub-cell samples of each cell.

        Subsets map to subsets exactly, because the same sample stencil is
        used for every cell; image cells falling in the removed boundary
        band are dropped.
        """
        pts = _cell_samples(self.source, region.ids)
        ids = np.unique(self.image_cells_of(self.map.evaluate(pts)))
        keep = ids[self.image.inside.ravel()[ids]]
        return Region(self.image, keep)


def _cell_samples(
    domain: GridDomain, ids: NDArray[np.int64]
) -> NDArray[np.float64]:
    centers = domain.centers_of(ids)
    h = domain.spacing
    return (centers[:, None, :] + h * _OFFSETS[None, :, :]).reshape(-1, 2)


def _boundary_samples(domain: GridDomain) -> NDArray[np.float64]:
    """Sample points tracing the source boundary.

    Uses the closed cells of the outward collar (removed or exterior
    cells next to inside ones, continuation frames excluded) plus the
    window-edge faces of inside cells on non-clipped sides, where the
    true boundary coincides with the window line.
    """
    h = domain.spacing
    collar = neighbor_any(domain.inside) & ~domain.inside
    collar &= ~frame_mask(domain)
    chunks = []
    if collar.any():
        chunks.append(_cell_samples(domain, domain.ids_of_cells(np.argwhere(collar))))
    shifts = np.array([(-0.5, 0.0), (0.5, 0.0), (0.0, -0.5), (0.0, 0.5)])
    along = np.array([(0.0, 0.5), (0.0, 0.5), (0.5, 0.0), (0.5, 0.0)])
    edges = (
        ("left", domain.inside[0, :], 1),
        ("right", domain.inside[-1, :], 1),
        ("bottom", domain.inside[:, 0], 0),
        ("top", domain.inside[:, -1], 0),
    )
    for k, (side, row, axis) in enumerate(edges):
        if side in domain.clipped_sides or not row.any():
            continue
        idx = np.flatnonzero(row)
        cells = np.zeros((len(idx), 2), dtype=np.int64)
        cells[:, axis] = idx
        if side == "right":
            cells[:, 0] = domain.nx - 1
        if side == "top":
            cells[:, 1] = domain.ny - 1
        centers = domain.centers_of(domain.ids_of_cells(cells))
        face = centers + h * shifts[k]
        step = h * along[k]
        chunks.append(
            np.concatenate([face - step, face, face + step], axis=0)
        )
    if not chunks:
        return np.empty((0, 2))
    return np.concatenate(chunks, axis=0)


def covering_target_spacing(
    spec: MapSpec, domain: GridDomain, margin: float = 2.0
) -> float:
    """Target spacing coarse enough that pushed samples leave no holes.

    Estimates the local stretch of the map as the spread of each cell's
    nine image samples relative to the cell diagonal and scales the
    source spacing by its 95th percentile, floored at the source spacing.
    """
    ids = domain.inside_ids
    if len(ids) > 4096:
        ids = ids[:: len(ids) // 4096 + 1]
    pts = _cell_samples(domain, ids).reshape(len(ids), 9, 2)
    images = spec.evaluate(pts.reshape(-1, 2)).reshape(len(ids), 9, 2)
    spread = images.max(axis=1) - images.min(axis=1)
    stretch = np.hypot(spread[:, 0], spread[:, 1]) / (
        domain.spacing * np.sqrt(2.0)
    )
    return margin * domain.spacing * max(1.0, float(np.quantile(stretch, 0.95)))


def apply_map(
    spec: MapSpec, domain: GridDomain, target_spacing: float
) -> Correspondence:
    """Rasterize the image of a domain and retain the cell correspondence.

    The nine sub-cell samples of every inside cell are pushed through the
    map; image cells hit by any sample become candidate inside cells.
    Cells touched by the image of the source boundary are then removed,
    mirroring how generators block the cells a zero-width obstacle
    passes through, so collapsing boundaries (a slit image, say) come
    out as removed bands rather than open seams. The image window is
    aligned to multiples of the target spacing, keeping the axes on
    lattice lines.
    """
    if target_spacing <= 0:
        raise BadParams("target spacing must be positive")
    ids = domain.inside_ids
    images = spec.evaluate(_cell_samples(domain, ids))
    ts = target_spacing
    x0 = ts * (np.floor(float(images[:, 0].min()) / ts) - 1.0)
    y0 = ts * (np.floor(float(images[:, 1].min()) / ts) - 1.0)
    nx = int(np.ceil((float(images[:, 0].max()) + ts - x0) / ts))
    ny = int(np.ceil((float(images[:, 1].max()) + ts - y0) / ts))
    if nx * ny > _CELL_LIMIT:
        raise TooLarge(
            f"image lattice {nx} x {ny} exceeds the cell limit; "
            "coarsen the target spacing or restrict the domain"
        )
    window = (x0, y0, x0 + nx * ts, y0 + ny * ts)
    ix = np.clip(((images[:, 0] - x0) / ts).astype(np.int64), 0, nx - 1)
    iy = np.clip(((images[:, 1] - y0) / ts).astype(np.int64), 0, ny - 1)
    inside = np.zeros((nx, ny), dtype=bool)
    inside[ix, iy] = True

    rim = _boundary_samples(domain)
    if len(rim):
        rim_images = spec.evaluate(rim)
        keep = (
            (rim_images[:, 0] >= x0)
            & (rim_images[:, 0] < window[2])
            & (rim_images[:, 1] >= y0)
            & (rim_images[:, 1] < window[3])
        )
        rim_images = rim_images[keep]
        bx = ((rim_images[:, 0] - x0) / ts).astype(np.int64)
        by = ((rim_images[:, 1] - y0) / ts).astype(np.int64)
        inside[bx, by] = False
    if not inside.any():
        raise EmptyRegion("boundary band removed the whole image")

    clipped: set[str] = set()
    frontier = frame_mask(domain) & domain.inside
    if frontier.any():
        f_ids = domain.ids_of_cells(np.argwhere(frontier))
        f_images = spec.evaluate(_cell_samples(domain, f_ids))
        fx, fy = f_images[:, 0], f_images[:, 1]
        if (fx <= x0 + 2 * ts).any():
            clipped.add("left")
        if (fx >= window[2] - 2 * ts).any():
            clipped.add("right")
        if (fy <= y0 + 2 * ts).any():
            clipped.add("bottom")
        if (fy >= window[3] - 2 * ts).any():
            clipped.add("top")

    image = GridDomain(
        spec=DomainSpec(
            f"{spec.name}_image",
            window=window,
            truncation=domain.spec.truncation,
        ),
        spacing=ts,
        window=window,
        inside=inside,
        clipped_sides=frozenset(clipped),
    )
    centers = spec.evaluate(domain.centers_of(ids))
    cx = np.clip(((centers[:, 0] - x0) / ts).astype(np.int64), 0, nx - 1)
    cy = np.clip(((centers[:, 1] - y0) / ts).astype(np.int64), 0, ny - 1)
    return Correspondence(
        map=spec, source=domain, image=image, cell_map=cx * ny + cy
    )
