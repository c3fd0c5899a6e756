"""Exact modulus on instances small enough to enumerate every curve."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy import optimize

from gridends.errors import EmptyRegion, TooLarge
from gridends.grids.domain import GridDomain, Region
from gridends.modulus.convex import min_norm_admissible

CURVE_CAP = 200
_STEP_CAP = 2_000_000


def enumerate_simple_curves(
    domain: GridDomain, e: Region, f: Region, cap: int = CURVE_CAP
) -> list[NDArray[np.int64]]:
    """All simple 4-connected cell paths from start to goal.

    A path touches the start set only at its first cell and the goal set
    only at its last cell; any other connecting curve contains one of
    these as a subpath, so its admissibility constraint is implied.
    Raises TooLarge past the cap or when the search expands too far.
    """
    if e.is_empty or f.is_empty:
        raise EmptyRegion("need nonempty start and goal sets")
    ny = domain.ny
    inside = domain.inside
    start_mask = e.mask()
    goal_mask = f.mask()
    curves: list[NDArray[np.int64]] = []
    steps = 0
    for seed in e.ids:
        six, siy = divmod(int(seed), ny)
        if goal_mask[six, siy]:
            curves.append(np.array([seed], dtype=np.int64))
            if len(curves) > cap:
                raise TooLarge(f"more than {cap} simple curves")
            continue
        on_path = np.zeros_like(inside)
        on_path[six, siy] = True
        path = [(six, siy)]
        # Stack of per-cell iterators over the four neighbor offsets.
        pending = [0]
        while path:
            steps += 1
            if steps > _STEP_CAP:
                raise TooLarge("curve enumeration expanded too far")
            ix, iy = path[-1]
            k = pending[-1]
            if k == 4:
                on_path[ix, iy] = False
                path.pop()
                pending.pop()
                continue
            pending[-1] += 1
            jx, jy = ((ix + 1, iy), (ix - 1, iy), (ix, iy + 1), (ix, iy - 1))[k]
            if not (0 <= jx < domain.nx and 0 <= jy < ny):
                continue
            if not inside[jx, jy] or on_path[jx, jy] or start_mask[jx, jy]:
                continue
            if goal_mask[jx, jy]:
                ids = [cx * ny + cy for cx, cy in path] + [jx * ny + jy]
                curves.append(np.array(ids, dtype=np.int64))
                if len(curves) > cap:
                    raise TooLarge(f"more than {cap} simple curves")
                continue
            on_path[jx, jy] = True
            path.append((jx, jy))
            pending.append(0)
    return curves


def curve_incidence(
    curves: list[NDArray[np.int64]],
) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
    """0/1 curve-by-cell matrix over the union support, plus the support ids."""
    support = np.unique(np.concatenate(curves))
    matrix = np.zeros((len(curves), len(support)))
    for row, curve in enumerate(curves):
        matrix[row, np.searchsorted(support, curve)] = 1.0
    return matrix, support


def modulus_oracle_small(
    domain: GridDomain, e: Region, f: Region, p: float = 2.0
) -> float:
    """Exact p-modulus by complete curve enumeration and one convex solve.

    The p = 2 case is solved by a finite active-set method; other
    exponents go through a tightly converged sequential quadratic solve.
    Disconnected sets carry the empty family and modulus zero.
    """
    curves = enumerate_simple_curves(domain, e, f)
    if not curves:
        return 0.0
    matrix, _ = curve_incidence(curves)
    h = domain.spacing
    if p == 2.0:
        x = min_norm_admissible(matrix)
        return float(np.sum(x**2))
    lengths = matrix.sum(axis=1)
    x0 = np.full(matrix.shape[1], 1.0 / float(lengths.min()))
    res = optimize.minimize(
        lambda x: float(np.sum(np.maximum(x, 0.0) ** p)),
        x0,
        jac=lambda x: p * np.maximum(x, 0.0) ** (p - 1),
        constraints=[{"type": "ineq", "fun": lambda x: matrix @ x - 1.0}],
        bounds=[(0.0, None)] * matrix.shape[1],
        method="SLSQP",
        options={"maxiter": 500, "ftol": 1e-14},
    )
    x = np.maximum(res.x, 0.0)
    worst = float((matrix @ x).min())
    if worst < 1.0:
        x /= max(worst, 1e-12)
    return float(h ** (2.0 - p) * np.sum(x**p))
