"""Tests for the modulus solver, its enumeration oracle, and cross-checks."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gridends.errors import BadParams, TooLarge
from gridends.grids.domain import DomainSpec, Region
from gridends.grids.generators import rasterize
from gridends.modulus import (
    CurveFamilySpec,
    curve_incidence,
    enumerate_simple_curves,
    modulus,
    modulus_oracle_small,
    solve_family,
)

from conftest import domain_from_mask, random_small_domain


def corridor(n: int, spacing: float = 1.0):
    dom = domain_from_mask(np.ones((n, 1), dtype=bool), spacing=spacing)
    first = Region.from_cells(dom, np.array([[0, 0]]))
    last = Region.from_cells(dom, np.array([[n - 1, 0]]))
    return dom, first, last


def side_regions(dom):
    ix = np.arange(dom.nx)
    left = Region.from_mask(dom, dom.inside & (ix[:, None] == 0))
    right = Region.from_mask(dom, dom.inside & (ix[:, None] == dom.nx - 1))
    return left, right


@pytest.mark.parametrize("n", [2, 5, 9])
@pytest.mark.parametrize("spacing", [1.0, 0.25])
def test_oracle_corridor_single_curve(n, spacing):
    dom, first, last = corridor(n, spacing)
    curves = enumerate_simple_curves(dom, first, last)
    assert len(curves) == 1
    assert len(curves[0]) == n
    value = modulus_oracle_small(dom, first, last, p=2.0)
    # One curve of n cells: constant rho = 1/(n h), energy 1/n.
    assert value == pytest.approx(1.0 / n, abs=1e-12)


def test_oracle_two_by_two_block():
    dom = domain_from_mask(np.ones((2, 2), dtype=bool))
    left, right = side_regions(dom)
    curves = enumerate_simple_curves(dom, left, right)
    assert len(curves) == 2
    value = modulus_oracle_small(dom, left, right, p=2.0)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_oracle_three_by_three_side_family():
    dom = domain_from_mask(np.ones((3, 3), dtype=bool))
    left, right = side_regions(dom)
    curves = enumerate_simple_curves(dom, left, right)
    # Each curve crosses the middle column along one monotone run.
    assert len(curves) == 9
    value = modulus_oracle_small(dom, left, right, p=2.0)
    assert value == pytest.approx(1.0, abs=1e-9)


def test_oracle_disconnected_sets_give_zero():
    mask = np.ones((5, 1), dtype=bool)
    mask[2, 0] = False
    dom = domain_from_mask(mask)
    first = Region.from_cells(dom, np.array([[0, 0]]))
    last = Region.from_cells(dom, np.array([[4, 0]]))
    assert enumerate_simple_curves(dom, first, last) == []
    assert modulus_oracle_small(dom, first, last) == 0.0
    family, solution = solve_family(dom, first, last)
    assert family.curves == ()
    assert solution.value == 0.0
    assert solution.rounds == 0
    assert not solution.density.any()


def test_oracle_rejects_large_instances():
    dom = domain_from_mask(np.ones((6, 6), dtype=bool))
    left, right = side_regions(dom)
    with pytest.raises(TooLarge):
        enumerate_simple_curves(dom, left, right)
    with pytest.raises(TooLarge):
        modulus_oracle_small(dom, left, right)


def test_oracle_matches_quadratic_programming_solver():
    cp = pytest.importorskip("cvxpy")
    dom = domain_from_mask(np.ones((3, 3), dtype=bool), spacing=0.5)
    left, right = side_regions(dom)
    curves = enumerate_simple_curves(dom, left, right)
    matrix, _ = curve_incidence(curves)
    x = cp.Variable(matrix.shape[1], nonneg=True)
    problem = cp.Problem(
        cp.Minimize(cp.sum_squares(x)), [matrix @ x >= 1.0]
    )
    reference = problem.solve()
    value = modulus_oracle_small(dom, left, right, p=2.0)
    assert value == pytest.approx(reference, abs=1e-6)


def test_oracle_cubic_exponent_on_corridor():
    dom, first, last = corridor(4, spacing=1.0)
    value = modulus_oracle_small(dom, first, last, p=3.0)
    # Uniform rho = 1/(4h) on the only curve: energy h^2 * 4 / (4h)^3.
    assert value == pytest.approx(1.0 / 16.0, rel=1e-6)
    _, solution = solve_family(dom, first, last, p=3.0)
    assert solution.value == pytest.approx(1.0 / 16.0, rel=0.02)


def test_family_invariants_are_enforced():
    dom, first, last = corridor(4)
    stray = np.array([1, 2, 3], dtype=np.int64)
    with pytest.raises(BadParams):
        CurveFamilySpec(dom, first, last, (stray,), ())


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 10_000))
def test_solver_agrees_with_oracle_on_small_domains(seed):
    rng = np.random.default_rng(seed)
    dom = random_small_domain(rng, max_cells=24)
    ids = dom.inside_ids
    first = Region(dom, ids[:1])
    last = Region(dom, ids[-1:])
    try:
        reference = modulus_oracle_small(dom, first, last, p=2.0)
    except TooLarge:
        assume(False)
    family, solution = solve_family(dom, first, last, p=2.0, tol=1e-3)
    assert solution.value == pytest.approx(reference, abs=1e-3)
    assert solution.gap <= 1e-3
    h = dom.spacing
    for curve in family.curves:
        along = solution.density.ravel()[curve].sum() * h
        assert along >= 1.0 - solution.gap - 1e-9
    swapped = modulus(dom, last, first, p=2.0, tol=1e-3)
    assert swapped.value == pytest.approx(solution.value, abs=2e-3)


def rectangle_sides(spacing: float):
    dom = rasterize(
        DomainSpec("rectangle", window=(0.0, 0.0, 2.0, 1.0)), spacing
    )
    left, right = side_regions(dom)
    return dom, left, right


def test_rectangle_side_family_matches_aspect_ratio():
    dom, left, right = rectangle_sides(1 / 30)
    assert (dom.nx, dom.ny) == (60, 30)
    solution = modulus(dom, left, right, p=2.0)
    # Continuum side-joining modulus of a 2 x 1 rectangle is 1/2, and the
    # entering-cell convention reproduces it exactly on straight rows.
    assert solution.value == pytest.approx(0.5, rel=0.15)
    assert solution.value == pytest.approx(0.5, abs=0.01)
    assert solution.gap <= 1e-3


def test_rectangle_value_is_stable_under_refinement():
    coarse = modulus(*rectangle_sides(1 / 30), p=2.0).value
    fine = modulus(*rectangle_sides(1 / 60), p=2.0).value
    assert abs(fine - coarse) / coarse < 0.08


def test_generation_record_is_monotone_in_value():
    dom, left, right = rectangle_sides(1 / 30)
    family, solution = solve_family(dom, left, right, p=2.0)
    values = [r.value for r in family.generation]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert [r.curves for r in family.generation] == list(
        range(1, solution.rounds + 1)
    )
    assert family.generation[-1].violation == solution.gap
