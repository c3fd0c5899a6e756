"""Distortion envelopes measured from sampled pairs and triples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from gridends.errors import BadParams
from gridends.grids.domain import GridDomain
from gridends.grids.ops import points_diameter
from gridends.maps.pairs import ContinuumPair
from gridends.maps.specs import MapSpec

_KD_CAP = 20_000


@dataclass(frozen=True, eq=False)
class EtaEnvelope:
    """Running-max staircase of measured distortion ratios.

    points rows are (t, s): at source ratio t the map was seen to distort
    by at most s over everything sampled at ratio t or below. The rows
    are sorted by t with s nondecreasing, so the staircase is a lower
    estimate of any true distortion control function. small_t_trend is
    the log-log slope fitted over the lower half of the t range, nan when
    too few finite samples land there.
    """

    points: NDArray[np.float64]
    small_t_trend: float

    def __len__(self) -> int:
        return len(self.points)

    def value_at(self, t: float) -> float:
        """Largest distortion seen at source ratio t or below."""
        idx = np.searchsorted(self.points[:, 0], t, side="right")
        if idx == 0:
            return 0.0
        return float(self.points[idx - 1, 1])


def _staircase(samples: list[tuple[float, float]]) -> EtaEnvelope:
    if not samples:
        raise BadParams("no distortion samples survived")
    arr = np.array(samples, dtype=np.float64)
    arr = arr[np.argsort(arr[:, 0], kind="stable")]
    arr[:, 1] = np.maximum.accumulate(arr[:, 1])
    # One row per distinct t: the last row of a tie carries the max.
    keep = np.r_[arr[1:, 0] > arr[:-1, 0], True]
    arr = arr[keep]
    finite = arr[np.isfinite(arr[:, 1]) & (arr[:, 1] > 0)]
    cut = np.sqrt(finite[:, 0].min() * finite[:, 0].max()) if len(finite) else 0
    low = finite[finite[:, 0] <= cut]
    if len(low) >= 3 and np.ptp(np.log(low[:, 0])) > 1e-9:
        slope = np.polyfit(np.log(low[:, 0]), np.log(low[:, 1]), 1)[0]
        trend = float(slope)
    else:
        trend = float("nan")
    return EtaEnvelope(points=arr, small_t_trend=trend)


def eta_envelope(
    spec: MapSpec, domain: GridDomain, pairs: list[ContinuumPair]
) -> EtaEnvelope:
    """Diameter-distortion staircase over intersecting continuum pairs.

    Each pair contributes t = diam E / diam F against s, the same ratio
    after mapping the cell centers. A pair whose image F collapses below
    resolvable size contributes an infinite ratio, which the staircase
    keeps: an unbounded envelope is the finding, not an error.
    """
    if not pairs:
        raise BadParams("need at least one pair")
    samples = []
    for pair in pairs:
        if not pair.intersecting:
            raise BadParams("diameter distortion needs intersecting pairs")
        t = pair.sizes[0] / pair.sizes[1]
        de = points_diameter(spec.evaluate(pair.e.centers()))
        df = points_diameter(spec.evaluate(pair.f.centers()))
        s = de / df if df > 1e-14 else float("inf")
        samples.append((t, s))
    return _staircase(samples)


def quasisymmetry_envelope(
    spec: MapSpec, domain: GridDomain, n_triples: int, seed: int
) -> EtaEnvelope:
    """Point-triple distortion staircase over random and adversarial triples.

    A triple (x, y, z) of distinct cell centers contributes the ratio
    t = |x - y| / |x - z| against its image counterpart. About a fifth of
    the triples are adversarial: z is chosen among the image-space
    nearest neighbors of x whose source distance stays large, the
    configuration that exposes a collapsing direction. Deterministic
    under the seed.
    """
    if n_triples < 1:
        raise BadParams("need at least one triple")
    rng = np.random.default_rng(seed)
    pts = domain.centers_of(domain.inside_ids)
    if len(pts) < 3:
        raise BadParams("domain too small for triples")
    if len(pts) > _KD_CAP:
        pts = pts[rng.choice(len(pts), _KD_CAP, replace=False)]
    images = spec.evaluate(pts)
    span = points_diameter(pts)
    tree = cKDTree(images)
    n_adv = n_triples // 5
    samples = []
    while len(samples) < n_triples:
        adversarial = len(samples) < n_adv
        i = int(rng.integers(len(pts)))
        if adversarial:
            k = min(16, len(pts))
            _, near = tree.query(images[i], k=k)
            far = np.flatnonzero(
                np.linalg.norm(pts[np.atleast_1d(near)] - pts[i], axis=1)
                >= 0.25 * span
            )
            if len(far) == 0:
                samples.append(_random_triple(rng, pts, images, i))
                continue
            kz = int(np.atleast_1d(near)[far[0]])
            j = int(rng.integers(len(pts)))
            if j in (i, kz):
                continue
            samples.append(_ratio_pair(pts, images, i, j, kz))
        else:
            samples.append(_random_triple(rng, pts, images, i))
    return _staircase(samples)


def _random_triple(
    rng: np.random.Generator,
    pts: NDArray[np.float64],
    images: NDArray[np.float64],
    i: int,
) -> tuple[float, float]:
    j, k = (int(v) for v in rng.choice(len(pts), 2, replace=False))
    while j == i or k == i:
        j, k = (int(v) for v in rng.choice(len(pts), 2, replace=False))
    return _ratio_pair(pts, images, i, j, k)


def _ratio_pair(
    pts: NDArray[np.float64],
    images: NDArray[np.float64],
    i: int,
    j: int,
    k: int,
) -> tuple[float, float]:
    t = np.linalg.norm(pts[i] - pts[j]) / np.linalg.norm(pts[i] - pts[k])
    num = np.linalg.norm(images[i] - images[j])
    den = np.linalg.norm(images[i] - images[k])
    s = num / den if den > 1e-14 else float("inf")
    return float(t), float(s)
