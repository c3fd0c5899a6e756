"""Relative distance and lower Loewner-profile fits from sampled pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from gridends.errors import BadParams, Degenerate
from gridends.grids.domain import GridDomain, Region
from gridends.grids.ops import diameter
from gridends.maps.pairs import sample_continuum_pairs
from gridends.modulus.solver import modulus

_FIT_CUTOFF = 0.5
_FLAG_FLOOR = 0.25
# Fractions of the window diagonal for the sampling strata; each stratum
# contributes pairs whose relative distances land about a decade apart.
_STRATA = ((0.25, 0.55), (0.1, 0.25), (0.04, 0.1), (0.015, 0.04))


def relative_distance(domain: GridDomain, e: Region, f: Region) -> float:
    """Separation of two continua in units of the smaller diameter.

    Distances and diameters are both measured over cell centers, so the
    opposite-edge reading on a unit square is exactly 1. Undersized sets
    (diameter below 4h) and sets touching at grid scale are Degenerate.
    """
    h = domain.spacing
    de = diameter(domain, e)
    df = diameter(domain, f)
    if min(de, df) < 4.0 * h:
        raise Degenerate("continuum smaller than four spacings")
    dist, _ = cKDTree(f.centers()).query(e.centers(), k=1)
    gap = float(np.min(dist))
    if gap <= np.sqrt(2.0) * h + 1e-12:
        raise Degenerate("continua touch at grid scale")
    return gap / min(de, df)


def phi(t: float, q: float) -> float:
    """Loewner gauge max(log(1/t), |log t|**(1 - q))."""
    if t <= 0:
        raise BadParams("gauge needs t > 0")
    if t == 1.0:
        return 0.0
    a = np.log(1.0 / t)
    return float(max(a, np.abs(np.log(t)) ** (1.0 - q)))


@dataclass(frozen=True, eq=False)
class LoewnerProfile:
    """Lower envelope of modulus against relative distance.

    samples rows are (relative distance, modulus). fitted_c is the
    largest constant with modulus >= c * phi(distance) on every sample at
    distance <= 1/2; the gauge degenerates nearer 1, so those samples are
    recorded but never fitted. fit_residual is the root mean square of
    the log excess above the fitted envelope, 0 when every fitted sample
    sits on it, nan when nothing was fittable.
    """

    q: float
    samples: NDArray[np.float64]
    fitted_c: float
    fit_residual: float

    @property
    def flagged(self) -> bool:
        """True when the envelope is too weak to look Loewner at scale."""
        return not self.fitted_c >= _FLAG_FLOOR


def fit_profile(
    q: float, samples: NDArray[np.float64]
) -> LoewnerProfile:
    """Lower-envelope constant and residual for measured (distance, mod) rows."""
    arr = np.asarray(samples, dtype=np.float64).reshape(-1, 2)
    if len(arr) == 0 or (arr[:, 0] <= 0).any():
        raise BadParams("need samples with positive relative distance")
    arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
    fit = arr[(arr[:, 0] <= _FIT_CUTOFF) & (arr[:, 1] > 0)]
    if len(fit) == 0:
        return LoewnerProfile(q, arr, 0.0, float("nan"))
    gauge = np.array([phi(t, q) for t in fit[:, 0]])
    ratios = fit[:, 1] / gauge
    c = float(ratios.min())
    residual = float(np.sqrt(np.mean(np.log(ratios / c) ** 2)))
    return LoewnerProfile(q, arr, c, residual)


def loewner_profile(
    domain: GridDomain, q: float, n_samples: int, seed: int
) -> LoewnerProfile:
    """Sampled modulus-versus-separation profile of a domain.

    Draws disjoint continuum pairs in strata of decreasing size so the
    relative distances spread over decades, solves the q-modulus of each
    pair, and fits the lower envelope. Deterministic under the seed.
    """
    if n_samples < 10:
        raise BadParams("need at least 10 samples")
    x0, y0, x1, y1 = domain.window
    diag = float(np.hypot(x1 - x0, y1 - y0))
    per = -(-n_samples // len(_STRATA))
    rows = []
    for k, (lo, hi) in enumerate(_STRATA):
        if len(rows) >= n_samples:
            break
        want = min(per, n_samples - len(rows))
        try:
            pairs = sample_continuum_pairs(
                domain, want, "disjoint", (lo * diag, hi * diag), seed + k
            )
        except BadParams:
            # This stratum does not fit in the domain; the rest still do.
            continue
        for pair in pairs:
            try:
                delta = relative_distance(domain, pair.e, pair.f)
            except Degenerate:
                continue
            value = modulus(domain, pair.e, pair.f, p=q).value
            rows.append((delta, value))
    if not rows:
        raise BadParams("no nondegenerate pair could be sampled")
    return fit_profile(q, np.array(rows))
