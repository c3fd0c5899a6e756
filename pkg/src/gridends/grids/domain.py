"""Core grid types: domain specs, rasterized domains, regions, anchors.

A rasterized domain is a boolean inside-mask over a cell lattice laid over an
axis-aligned window. Cell (ix, iy) covers the closed square
[x0 + ix*h, x0 + (ix+1)*h] x [y0 + iy*h, y0 + (iy+1)*h] and is identified
with its center. Connectivity is 4-neighbor throughout: a one-cell-thick
rasterized slit must disconnect its two sides.

Every distance in the package is the Euclidean distance between cell centers,
never a graph-hop count; the Mazurkiewicz machinery depends on dominating the
ambient metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from gridends.errors import BadParams, EmptyRegion

Window = tuple[float, float, float, float]

SIDES = ("left", "right", "bottom", "top")

# 4-neighbor structuring element for every flood fill in the package.
CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class DomainSpec:
    """Declarative description of a domain: generator name + parameters.

    Attributes:
        name: registered generator identifier (see grids.generators).
        params: numeric parameters of the generator.
        window: requested axis-aligned rectangle (x0, y0, x1, y1) in world
            units. Generators may shrink it (e.g. comb generators clip away
            the un-representable accumulation tail); the effective window
            lives on the GridDomain.
        truncation: how many members of an infinite family to realize.
    """

    name: str
    params: dict[str, float] = field(default_factory=dict)
    window: Window = (0.0, 0.0, 1.0, 1.0)
    truncation: int = 1

    def __post_init__(self) -> None:
        x0, y0, x1, y1 = self.window
        if not (x1 > x0 and y1 > y0):
            raise BadParams(f"window must have positive extent, got {self.window}")
        if self.truncation < 1:
            raise BadParams(f"truncation must be >= 1, got {self.truncation}")


@dataclass(frozen=True, eq=False)
class GridDomain:
    """Immutable rasterized domain.

    Attributes:
        spec: the DomainSpec this grid realizes.
        spacing: cell side length h.
        window: effective window actually rasterized.
        inside: boolean mask of shape (nx, ny); inside[ix, iy] marks domain
            cells.
        clipped_sides: window sides where the true geometry continues beyond
            the window (truncation artifacts). Cells hugging these sides
            stand for escape toward the un-rasterized part of the domain,
            not for boundary.
    """

    spec: DomainSpec
    spacing: float
    window: Window
    inside: NDArray[np.bool_]
    clipped_sides: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.spacing <= 0:
            raise BadParams("spacing must be positive")
        bad = set(self.clipped_sides) - set(SIDES)
        if bad:
            raise BadParams(f"unknown window sides: {sorted(bad)}")
        self.inside.flags.writeable = False

    # -- lattice geometry ------------------------------------------------

    @property
    def nx(self) -> int:
        return self.inside.shape[0]

    @property
    def ny(self) -> int:
        return self.inside.shape[1]

    @property
    def n_inside(self) -> int:
        return int(self.inside.sum())

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        x0, y0, _, _ = self.window
        h = self.spacing
        return (x0 + (ix + 0.5) * h, y0 + (iy + 0.5) * h)

    def centers_of(self, ids: NDArray[np.int64]) -> NDArray[np.float64]:
        """World coordinates of cell centers, shape (n, 2)."""
        x0, y0, _, _ = self.window
        h = self.spacing
        ix, iy = np.divmod(np.asarray(ids, dtype=np.int64), self.ny)
        return np.column_stack((x0 + (ix + 0.5) * h, y0 + (iy + 0.5) * h))

    def ids_of_cells(self, cells: NDArray[np.int64]) -> NDArray[np.int64]:
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        return cells[:, 0] * self.ny + cells[:, 1]

    def cells_of_ids(self, ids: NDArray[np.int64]) -> NDArray[np.int64]:
        ix, iy = np.divmod(np.asarray(ids, dtype=np.int64), self.ny)
        return np.column_stack((ix, iy))

    def point_cell(self, x: float, y: float) -> tuple[int, int] | None:
        """Lattice cell containing a world point, or None outside the window."""
        x0, y0, x1, y1 = self.window
        h = self.spacing
        if not (x0 <= x < x1 and y0 <= y < y1):
            return None
        return (int((x - x0) / h), int((y - y0) / h))

    def is_inside_cell(self, ix: int, iy: int) -> bool:
        if 0 <= ix < self.nx and 0 <= iy < self.ny:
            return bool(self.inside[ix, iy])
        return False

    @cached_property
    def inside_ids(self) -> NDArray[np.int64]:
        ix, iy = np.nonzero(self.inside)
        return (ix.astype(np.int64) * self.ny + iy).astype(np.int64)

    # -- components ------------------------------------------------------

    @cached_property
    def labels(self) -> NDArray[np.int32]:
        """4-connected component label per cell; 0 outside the domain."""
        lab, _ = ndimage.label(self.inside, structure=CROSS)
        lab.flags.writeable = False
        return lab

    @property
    def n_components(self) -> int:
        return int(self.labels.max())

    def component_of(self, ids: NDArray[np.int64]) -> NDArray[np.int32]:
        cells = self.cells_of_ids(ids)
        return self.labels[cells[:, 0], cells[:, 1]]

    # -- window frame ----------------------------------------------------

    @cached_property
    def continuation_mask(self) -> NDArray[np.bool_]:
        """Inside cells on the frame of a clipped side.

        These cells stand for the domain continuing past the window; they
        are never treated as evidence of boundary.
        """
        mask = np.zeros_like(self.inside)
        if "left" in self.clipped_sides:
            mask[0, :] = True
        if "right" in self.clipped_sides:
            mask[-1, :] = True
        if "bottom" in self.clipped_sides:
            mask[:, 0] = True
        if "top" in self.clipped_sides:
            mask[:, -1] = True
        mask &= self.inside
        mask.flags.writeable = False
        return mask

    def touches_frame(self, ids: NDArray[np.int64]) -> bool:
        """True if any of the cells lies on a clipped-side frame."""
        if len(ids) == 0:
            return False
        cells = self.cells_of_ids(ids)
        return bool(self.continuation_mask[cells[:, 0], cells[:, 1]].any())


@dataclass(frozen=True, eq=False)
class Region:
    """A set of inside cells of one domain, stored as sorted flat ids."""

    domain: GridDomain
    ids: NDArray[np.int64]

    def __post_init__(self) -> None:
        ids = np.unique(np.asarray(self.ids, dtype=np.int64))
        object.__setattr__(self, "ids", ids)
        self.ids.flags.writeable = False
        if len(ids) and not np.isin(ids, self.domain.inside_ids).all():
            raise EmptyRegion("region contains cells outside the domain")

    @classmethod
    def from_mask(cls, domain: GridDomain, mask: NDArray[np.bool_]) -> "Region":
        ix, iy = np.nonzero(mask & domain.inside)
        return cls(domain, ix.astype(np.int64) * domain.ny + iy)

    @classmethod
    def from_cells(
        cls, domain: GridDomain, cells: Iterable[tuple[int, int]]
    ) -> "Region":
        arr = np.asarray(list(cells), dtype=np.int64).reshape(-1, 2)
        return cls(domain, domain.ids_of_cells(arr))

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def is_empty(self) -> bool:
        return len(self.ids) == 0

    def mask(self) -> NDArray[np.bool_]:
        out = np.zeros((self.domain.nx, self.domain.ny), dtype=bool)
        if len(self.ids):
            cells = self.domain.cells_of_ids(self.ids)
            out[cells[:, 0], cells[:, 1]] = True
        return out

    def centers(self) -> NDArray[np.float64]:
        return self.domain.centers_of(self.ids)

    def cells(self) -> NDArray[np.int64]:
        return self.domain.cells_of_ids(self.ids)

    def same_cells(self, other: "Region") -> bool:
        return self.domain is other.domain and np.array_equal(self.ids, other.ids)

    def is_subset(self, other: "Region") -> bool:
        if self.is_empty:
            return True
        return bool(np.isin(self.ids, other.ids).all())

    def intersects(self, other: "Region") -> bool:
        if self.is_empty or other.is_empty:
            return False
        return bool(np.isin(self.ids, other.ids, assume_unique=True).any())

    def intersection(self, other: "Region") -> "Region":
        return Region(self.domain, np.intersect1d(self.ids, other.ids))

    def union(self, other: "Region") -> "Region":
        return Region(self.domain, np.union1d(self.ids, other.ids))

    def difference(self, other: "Region") -> "Region":
        return Region(
            self.domain, np.setdiff1d(self.ids, other.ids, assume_unique=True)
        )


@dataclass(frozen=True, eq=False)
class BoundaryAnchor:
    """A world point on the domain boundary with its incident cells.

    The point must not coincide with an inside cell center (it stands for a
    boundary point, which the grid never contains). The incidence radius is
    fixed at 2h everywhere in the package: the grid proxy for "x lies on the
    boundary of U" is "U comes within 2h of x".
    """

    domain: GridDomain
    point: tuple[float, float]

    def __post_init__(self) -> None:
        cell = self.domain.point_cell(*self.point)
        if cell is not None and self.domain.is_inside_cell(*cell):
            cx, cy = self.domain.cell_center(*cell)
            px, py = self.point
            if abs(px - cx) < 1e-12 and abs(py - cy) < 1e-12:
                raise BadParams(
                    f"anchor {self.point} coincides with an inside cell center"
                )

    @property
    def incidence_radius(self) -> float:
        return 2.0 * self.domain.spacing

    @cached_property
    def incident_ids(self) -> NDArray[np.int64]:
        """Inside cells whose centers lie within 2h of the anchor point."""
        dom = self.domain
        centers = dom.centers_of(dom.inside_ids)
        d = np.hypot(centers[:, 0] - self.point[0], centers[:, 1] - self.point[1])
        return dom.inside_ids[d <= self.incidence_radius]
