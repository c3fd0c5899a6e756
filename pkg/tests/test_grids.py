"""Geometry and lattice invariants of the rasterized domain layer.

Expected values come from the defining formulas of the example domains
(tooth abscissas, slit spans, claw segments) evaluated by hand, never from
the code under test. Lattice-level properties (component partitions, ball
monotonicity, diameter monotonicity) are exercised on random small domains.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridends.errors import (
    BadParams,
    EmptyRegion,
    SpacingTooCoarse,
    UnknownGenerator,
)
from gridends.grids import (
    BoundaryAnchor,
    DomainSpec,
    Region,
    ball,
    components,
    diameter,
    load_mask,
    load_spec,
    rasterize,
    save_mask,
    save_spec,
    stereographic_project,
)
from gridends.grids.ops import chordal_distance, points_diameter

from conftest import domain_from_mask, random_small_domain


def cell_at(domain, x: float, y: float) -> bool:
    """Whether the cell containing a world point is a domain cell."""
    cell = domain.point_cell(x, y)
    return cell is not None and domain.is_inside_cell(*cell)


def test_full_rectangle_all_interior_cells():
    dom = rasterize(DomainSpec("rectangle", window=(0, 0, 1, 1)), 1 / 8)
    assert dom.n_inside == 64
    assert dom.n_components == 1
    assert not dom.clipped_sides


def test_harmonic_comb_tooth_positions():
    dom = rasterize(DomainSpec("harmonic_comb", truncation=8), 1 / 256)
    for n in range(2, 10):
        assert not cell_at(dom, 1 / n, 0.25), f"tooth at 1/{n} missing"
        mid = (1 / n + 1 / (n + 1)) / 2
        assert cell_at(dom, mid, 0.25), f"gap right of tooth 1/{n + 1} filled"
    assert cell_at(dom, 0.5 + 1 / 64, 0.25)
    # Teeth span y in [0, 1/2] and stop there.
    assert not cell_at(dom, 0.5, 0.49)
    assert cell_at(dom, 0.5, 0.52)
    # The window is clipped at the first tooth not drawn.
    assert dom.window[0] == pytest.approx(1 / 10)
    assert "left" in dom.clipped_sides


def test_gate_barrier_removed_segments():
    spec = DomainSpec(
        "barrier_gate",
        params={"height": 0.5, "k_max": 1},
        window=(-2, -1, 2, 1),
    )
    dom = rasterize(spec, 1 / 32)
    for t in np.linspace(-0.24, 0.24, 9):
        assert not cell_at(dom, 0.5, t), "post at x=1/2 missing"
    for t in np.linspace(0.52, 1.98, 9):
        assert not cell_at(dom, t, 0.25), "upper arm missing"
        assert not cell_at(dom, t, -0.25), "lower arm missing"
        assert not cell_at(dom, -t, 0.25), "mirror arm missing"
    for t in np.linspace(1.02, 1.98, 7):
        assert not cell_at(dom, t, 0.0), "baseline missing"
    # The aperture and the central shaft stay open.
    assert cell_at(dom, 0.0, 0.0)
    assert cell_at(dom, 0.25, 0.1)
    assert cell_at(dom, 0.0, -0.4)


def test_double_comb_tooth_layout():
    dom = rasterize(DomainSpec("double_comb", truncation=4), 1 / 256)
    for n in range(2, 5):
        y_lo, y_hi = 1 / (2 * n), 1 / (2 * n + 1)
        assert not cell_at(dom, 0.3, y_lo), f"left tooth n={n} missing"
        assert cell_at(dom, 1 - 1 / n + 1 / 32, y_lo)
        assert not cell_at(dom, 0.7, y_hi), f"right tooth n={n} missing"
        assert cell_at(dom, 1 / n - 1 / 32, y_hi)


def test_strip_with_slits_layout():
    dom = rasterize(
        DomainSpec("strip_with_slits", truncation=4, window=(0, 0, 6, 1)),
        1 / 128,
    )
    for k in range(1, 5):
        assert not cell_at(dom, k - 0.5, 2.0**-k), f"slit k={k} missing"
        assert cell_at(dom, k + 0.5, 2.0**-k), f"slit k={k} too long"
    assert dom.clipped_sides == frozenset({"right"})


def test_generator_rejections():
    with pytest.raises(UnknownGenerator):
        rasterize(DomainSpec("moebius_strip"), 1 / 16)
    with pytest.raises(BadParams):
        DomainSpec("harmonic_comb", truncation=0)
    with pytest.raises(SpacingTooCoarse):
        rasterize(DomainSpec("harmonic_comb", truncation=8), 1 / 16)


def test_components_comb_strips():
    dom = rasterize(DomainSpec("harmonic_comb", truncation=4), 1 / 256)
    xs = (np.arange(dom.nx) + 0.5) * dom.spacing + dom.window[0]
    ys = (np.arange(dom.ny) + 0.5) * dom.spacing + dom.window[1]
    mask = (xs[:, None] < 0.5) & (ys[None, :] < 0.5)
    region = Region.from_mask(dom, mask)
    parts = components(dom, region)
    assert len(parts) == 4
    assert sum(len(p) for p in parts) == len(region)


def test_components_empty_region(unit_square_64):
    empty = Region(unit_square_64, np.empty(0, dtype=np.int64))
    assert components(unit_square_64, empty) == []


def test_ball_covers_disk(disk_64):
    b = ball(disk_64, (0.0, 0.0), 1.2)
    assert len(b) == disk_64.n_inside


def test_ball_at_slit_midpoint_splits(slit_disk_128):
    b = ball(slit_disk_128, (0.5, 0.0), 0.1)
    assert len(components(slit_disk_128, b)) == 2


def test_ball_between_centers_can_be_empty(unit_square_64):
    b = ball(unit_square_64, (0.5, 0.5), 1 / 300)
    assert b.is_empty


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ball_monotone_in_radius(seed):
    rng = np.random.default_rng(seed)
    dom = random_small_domain(rng)
    center = tuple(rng.uniform(0, 3, size=2) * dom.spacing)
    r1, r2 = sorted(rng.uniform(0.1, 4, size=2) * dom.spacing)
    assert ball(dom, center, r1).is_subset(ball(dom, center, r2))


def test_diameter_frozen_cases():
    dom = rasterize(DomainSpec("rectangle", window=(0, 0, 1, 1)), 1 / 8)
    one = Region(dom, dom.inside_ids[:1])
    assert diameter(dom, one) == 0.0
    assert diameter(dom, Region(dom, dom.inside_ids)) == pytest.approx(
        math.sqrt(2) * 7 / 8
    )
    two = Region.from_cells(dom, [(1, 1), (5, 1)])
    assert diameter(dom, two) == pytest.approx(0.5)
    with pytest.raises(EmptyRegion):
        diameter(dom, Region(dom, np.empty(0, dtype=np.int64)))


def test_points_diameter_matches_pairwise_on_large_cloud():
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(500, 2))
    brute = np.linalg.norm(pts[:, None] - pts[None, :], axis=2).max()
    assert points_diameter(pts) == pytest.approx(float(brute))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_components_partition_region(seed):
    rng = np.random.default_rng(seed)
    dom = random_small_domain(rng)
    pick = rng.random(dom.n_inside) < 0.7
    region = Region(dom, dom.inside_ids[pick])
    parts = components(dom, region)
    if region.is_empty:
        assert parts == []
        return
    union = np.sort(np.concatenate([p.ids for p in parts]))
    assert np.array_equal(union, region.ids)
    assert len(union) == sum(len(p) for p in parts)
    for p in parts:
        assert diameter(dom, p) <= diameter(dom, region) + 1e-12


def test_refinement_agrees_up_to_collar():
    spec = DomainSpec("slit_disk", window=(-1.05, -1.05, 1.05, 1.05))
    coarse = rasterize(spec, 1 / 64)
    fine = rasterize(spec, 1 / 128)
    agree = np.zeros_like(coarse.inside)
    for ix in range(coarse.nx):
        for iy in range(coarse.ny):
            cx, cy = coarse.cell_center(ix, iy)
            cell = fine.point_cell(cx, cy)
            fv = cell is not None and fine.is_inside_cell(*cell)
            agree[ix, iy] = fv == coarse.inside[ix, iy]
    inner = coarse.inside.copy()
    flips = np.zeros_like(inner)
    flips[:-1, :] |= inner[:-1, :] != inner[1:, :]
    flips[1:, :] |= inner[:-1, :] != inner[1:, :]
    flips[:, :-1] |= inner[:, :-1] != inner[:, 1:]
    flips[:, 1:] |= inner[:, :-1] != inner[:, 1:]
    assert (agree | flips).all()


def test_anchor_incidence(disk_64):
    anchor = BoundaryAnchor(disk_64, (1.0, 0.0))
    assert anchor.incidence_radius == pytest.approx(2 / 64)
    pts = disk_64.centers_of(anchor.incident_ids)
    d = np.hypot(pts[:, 0] - 1.0, pts[:, 1])
    assert len(pts) > 0 and d.max() <= anchor.incidence_radius + 1e-12
    center = disk_64.centers_of(disk_64.inside_ids[:1])[0]
    with pytest.raises(BadParams):
        BoundaryAnchor(disk_64, (float(center[0]), float(center[1])))


def test_spec_roundtrip(tmp_path):
    spec = DomainSpec(
        "gate_half_plane",
        params={"k_max": 3, "gate_height_scale": 0.8},
        window=(-4.5, 0.0, 16.5, 0.75),
        truncation=2,
    )
    path = tmp_path / "gate.json"
    save_spec(path, spec)
    back = load_spec(path)
    assert back == spec


def test_mask_roundtrip(tmp_path, slit_disk_128):
    path = tmp_path / "slit.grid"
    save_mask(path, slit_disk_128)
    back = load_mask(path)
    assert back.spacing == slit_disk_128.spacing
    assert back.window == slit_disk_128.window
    assert back.clipped_sides == slit_disk_128.clipped_sides
    assert np.array_equal(back.inside, slit_disk_128.inside)


def test_stereographic_poles_and_segment():
    south = stereographic_project(np.array([[0.0, 0.0]]))[0]
    assert np.allclose(south, [0, 0, -1])
    far = stereographic_project(np.array([[1e8, 0.0]]))[0]
    assert np.allclose(far, [0, 0, 1], atol=1e-7)
    # Chordal diameter of a projected radial segment is the endpoint chord.
    r = 0.01
    samples = np.column_stack((np.linspace(r, 1, 200), np.zeros(200)))
    img = stereographic_project(samples)
    expect = chordal_distance(np.array([[r, 0.0]]), np.array([[1.0, 0.0]]))
    assert points_diameter(img) == pytest.approx(float(expect[0]))
