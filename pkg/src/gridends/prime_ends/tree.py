"""Scale trees of boundary-ball components.

Around a boundary anchor, the components of B(anchor, r) intersected with
the domain form a forest as r halves: each component at the smaller radius
lies in exactly one component at the larger radius. Only components that
come within the anchor's incidence radius are kept as nodes; a level where
no component does is recorded as empty. Root-to-leaf paths of this forest
are the canonical nested approximations from which chains are enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gridends.errors import RadiusUnresolvable
from gridends.grids.domain import BoundaryAnchor, GridDomain, Region
from gridends.grids.ops import ball, components


def _id_in(ids: np.ndarray, value: int) -> bool:
    i = int(np.searchsorted(ids, value))
    return i < len(ids) and int(ids[i]) == value


@dataclass(frozen=True, eq=False)
class TreeNode:
    """One touching component of a boundary ball at one scale level."""

    level: int
    index: int
    region: Region
    parent_index: int | None


@dataclass(frozen=True, eq=False)
class ScaleTree:
    """Component forest of dyadically shrinking boundary balls."""

    domain: GridDomain
    anchor: BoundaryAnchor
    radii: tuple[float, ...]
    levels: tuple[tuple[TreeNode, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.radii) - 1

    def leaves(self) -> tuple[TreeNode, ...]:
        return self.levels[-1]


def scale_component_tree(
    domain: GridDomain, anchor: BoundaryAnchor, r0: float, depth: int
) -> ScaleTree:
    """Build the component forest at radii r0 * 2^-j for j = 0 .. depth.

    The deepest radius must be at least one cell spacing, otherwise the
    deepest components are not resolvable on the lattice. A level where no
    ball component reaches the anchor's incidence disk is stored empty, and
    every level below it stays empty too.
    """
    if r0 <= 0 or depth < 0:
        raise RadiusUnresolvable("need r0 > 0 and depth >= 0")
    radii = tuple(r0 * 2.0**-j for j in range(depth + 1))
    if radii[-1] < domain.spacing:
        raise RadiusUnresolvable(
            f"deepest radius {radii[-1]:.6g} is below one cell "
            f"spacing {domain.spacing:.6g}"
        )
    point = np.asarray(anchor.point, dtype=float)
    reach = anchor.incidence_radius + 1e-12
    levels: list[tuple[TreeNode, ...]] = []
    for j, r in enumerate(radii):
        br = ball(domain, (float(point[0]), float(point[1])), r)
        nodes: list[TreeNode] = []
        if not br.is_empty:
            for part in components(domain, br):
                d = np.linalg.norm(part.centers() - point, axis=1)
                if float(d.min()) > reach:
                    continue
                if j == 0:
                    parent = None
                else:
                    # Nested balls: the first cell pins the unique parent,
                    # and the parent inherits the child's touching cell.
                    first = int(part.ids[0])
                    parent = next(
                        (
                            k
                            for k, up in enumerate(levels[j - 1])
                            if _id_in(up.region.ids, first)
                        ),
                        None,
                    )
                    if parent is None:
                        continue
                nodes.append(
                    TreeNode(
                        level=j,
                        index=len(nodes),
                        region=part,
                        parent_index=parent,
                    )
                )
        levels.append(tuple(nodes))
    return ScaleTree(domain, anchor, radii, tuple(levels))
