"""Convex solves for admissible-density programs over fixed curve sets.

Both entry points minimize over scaled densities x = rho * h, so the
constraint for a curve is plain summation: incidence @ x >= 1. Callers
convert the optimum back to per-cell rho and to the p-energy.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import nnls


def min_norm_admissible(incidence: NDArray[np.float64]) -> NDArray[np.float64]:
    """Exact minimizer of sum x^2 subject to incidence @ x >= 1, x >= 0.

    Uses the Lawson-Hanson least-distance reduction to nonnegative least
    squares, a finite active-set method. The sign constraint costs
    nothing: the optimum is a nonnegative combination of the nonnegative
    constraint rows, hence nonnegative on its own.
    """
    m, s = incidence.shape
    stacked = np.vstack([incidence.T, np.ones((1, m))])
    target = np.zeros(s + 1)
    target[s] = 1.0
    multipliers, _ = nnls(stacked, target)
    residual = stacked @ multipliers - target
    scale = float(residual[s])
    if abs(scale) < 1e-14:
        raise ArithmeticError("least-distance reduction found no feasible point")
    x = np.maximum(-residual[:s] / scale, 0.0)
    worst = float((incidence @ x).min())
    if worst < 1.0:
        # Numerical dust only: restore exact admissibility.
        x /= worst
    return x


def min_power_admissible(
    incidence: NDArray[np.float64], p: float, iters: int = 2000
) -> NDArray[np.float64]:
    """Approximate minimizer of sum x^p subject to incidence @ x >= 1, x >= 0.

    Projected subgradient with step schedule c / sqrt(k); after every
    step the iterate is clipped to the cone and rescaled back onto the
    admissible set, which always succeeds because scaling up satisfies
    every constraint. Deterministic; the best admissible iterate wins.
    """
    if p <= 1:
        raise ValueError("need p > 1 for a convex energy")
    m, s = incidence.shape
    lengths = incidence.sum(axis=1)
    x = np.full(s, 1.0 / float(lengths.min()))
    grad0 = p * x ** (p - 1)
    step0 = 0.25 * float(x.max()) / float(np.abs(grad0).max() + 1e-30)
    best = x.copy()
    best_energy = float(np.sum(x**p))
    for k in range(1, iters + 1):
        grad = p * x ** (p - 1)
        x = np.maximum(x - (step0 / np.sqrt(k)) * grad, 0.0)
        worst = float((incidence @ x).min())
        if worst <= 1e-12:
            x = 0.5 * (x + best)
            worst = float((incidence @ x).min())
            if worst <= 1e-12:
                x = best.copy()
                continue
        x /= worst
        energy = float(np.sum(x**p))
        if energy < best_energy:
            best_energy = energy
            best = x.copy()
    return best
