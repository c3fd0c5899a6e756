"""Sampled bounded-turning diagnostics.

A domain is bounded turning with constant lam when any two points can be
joined by a continuum of diameter at most lam times their distance. The
sampler draws random same-component cell pairs, measures the certified
upper bound of their Mazurkiewicz distance against the ambient distance,
and reports the worst ratio seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from gridends.errors import Degenerate
from gridends.grids.domain import GridDomain
from gridends.mazurkiewicz.bracket import mazurkiewicz_distance


@dataclass(frozen=True)
class BoundedTurningReport:
    """Worst observed detour ratio over sampled cell pairs."""

    lam: float
    worst_pair: tuple[tuple[int, int], tuple[int, int]]
    n_samples: int
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "worst_pair": [list(c) for c in self.worst_pair],
        }


def bounded_turning_constant(
    domain: GridDomain, n_samples: int = 200, seed: int = 0
) -> BoundedTurningReport:
    """Sampled lower estimate of the bounded-turning constant.

    Ratios use the certified upper bound of the pair distance, so the
    report never understates a detour by more than the bracket factor.
    """
    ids = domain.inside_ids
    if ids.size < 2:
        raise Degenerate("need at least two cells to sample pairs")
    rng = np.random.default_rng(np.random.PCG64(seed))
    flat_labels = domain.labels.ravel()
    centers = domain.centers_of(ids)
    lam = 1.0
    worst = (ids[0], ids[0])
    drawn = 0
    attempts = 0
    while drawn < n_samples and attempts < 50 * n_samples:
        attempts += 1
        i, j = rng.integers(0, ids.size, size=2)
        if i == j:
            continue
        a, b = int(ids[i]), int(ids[j])
        if flat_labels[a] != flat_labels[b]:
            continue
        drawn += 1
        d_x = float(np.linalg.norm(centers[i] - centers[j]))
        est = mazurkiewicz_distance(domain, a, b)
        ratio = est.upper / d_x
        if ratio > lam:
            lam = ratio
            worst = (a, b)
    cells = domain.cells_of_ids(np.array(worst, dtype=np.int64))
    return BoundedTurningReport(
        lam=lam,
        worst_pair=(
            (int(cells[0][0]), int(cells[0][1])),
            (int(cells[1][0]), int(cells[1][1])),
        ),
        n_samples=drawn,
        seed=seed,
    )
