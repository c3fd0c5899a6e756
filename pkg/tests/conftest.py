"""Shared fixtures and small-domain helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import ndimage

from gridends.grids.domain import CROSS, DomainSpec, GridDomain


def domain_from_mask(
    mask: np.ndarray, spacing: float = 1.0, name: str = "rectangle"
) -> GridDomain:
    """Wrap an explicit inside mask as a domain for unit tests."""
    nx, ny = mask.shape
    return GridDomain(
        spec=DomainSpec(name, window=(0.0, 0.0, nx * spacing, ny * spacing)),
        spacing=spacing,
        window=(0.0, 0.0, nx * spacing, ny * spacing),
        inside=np.ascontiguousarray(mask, dtype=bool),
        clipped_sides=frozenset(),
    )


def random_small_domain(
    rng: np.random.Generator, max_cells: int = 64
) -> GridDomain:
    """A connected random domain with at most max_cells cells.

    Draws a random occupancy mask on a small lattice and keeps the largest
    4-connected component, retrying until it has at least two cells.
    """
    while True:
        nx = int(rng.integers(3, 9))
        ny = int(rng.integers(3, 9))
        density = float(rng.uniform(0.45, 0.9))
        mask = rng.random((nx, ny)) < density
        labels, count = ndimage.label(mask, structure=CROSS)
        if count == 0:
            continue
        sizes = ndimage.sum_labels(mask, labels, index=np.arange(1, count + 1))
        best = int(np.argmax(sizes)) + 1
        comp = labels == best
        if 2 <= comp.sum() <= max_cells:
            spacing = float(rng.choice([1.0, 0.5, 0.125]))
            return domain_from_mask(comp, spacing=spacing)


@pytest.fixture(scope="session")
def unit_square_64():
    from gridends.grids.generators import rasterize

    return rasterize(DomainSpec("rectangle", window=(0, 0, 1, 1)), 1 / 64)


@pytest.fixture(scope="session")
def disk_64():
    from gridends.grids.generators import rasterize

    return rasterize(
        DomainSpec("disk", window=(-1.05, -1.05, 1.05, 1.05)), 1 / 64
    )


@pytest.fixture(scope="session")
def slit_disk_128():
    from gridends.grids.generators import rasterize

    return rasterize(
        DomainSpec("slit_disk", window=(-1.05, -1.05, 1.05, 1.05)), 1 / 128
    )
