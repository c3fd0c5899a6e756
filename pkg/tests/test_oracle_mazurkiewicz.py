"""Exact small-case expectations for the Mazurkiewicz distance machinery.

The frozen values below were derived by hand before the estimator was
written. On a 4-connected grid the distance between two cells is the least
possible diameter (max pairwise center distance) of a connected cell path
containing both, so:

* On a full rectangle the straight staircase between two cells is itself a
  minimal-diameter path, giving exactly the Euclidean center distance.
* On a 7x4 grid with a wall at column 3 up to height 3 (gap in the top
  row), the best path from (2,0) to (4,0) climbs to the top row and back
  down; its extreme cells are (2,0) and (4,3), so the diameter is
  sqrt(2^2 + 3^2) * h = sqrt(13) * h.
* 4-adjacent cells give h, a cell with itself gives 0, and cells in
  different components give infinity.

An independent branch-and-bound oracle (implemented here, in test code, on
top of networkx adjacency) cross-checks the packaged oracle on random small
domains, and the interval estimator must bracket the exact value with its
advertised two-sided guarantee.
"""

from __future__ import annotations

import math
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from gridends.errors import TooLarge
from gridends.mazurkiewicz import (
    brute_force_oracle,
    mazurkiewicz_distance,
    mazurkiewicz_set_distance,
)
from gridends.grids.domain import Region

from conftest import domain_from_mask, random_small_domain


def reference_min_diameter(domain, x, y) -> float:
    """Independent exact minimal path diameter via best-first search.

    States are frozen cell paths; a state's cost is the diameter of its cell
    set, which never decreases as the path grows, so the first time the
    target is popped the cost is optimal.
    """
    import heapq

    g = nx.Graph()
    ids = domain.inside_ids
    pts = {int(i): tuple(domain.centers_of(np.array([i]))[0]) for i in ids}
    for i in ids:
        g.add_node(int(i))
    for i in ids:
        for j in (i + 1, i + domain.ny):
            if int(j) in pts:
                a, b = pts[int(i)], pts[int(j)]
                if abs(a[0] - b[0]) + abs(a[1] - b[1]) <= domain.spacing * 1.5:
                    g.add_edge(int(i), int(j))
    xi, yi = int(x), int(y)
    if xi == yi:
        return 0.0
    heap = [(0.0, (xi,))]
    seen: dict[tuple[int, ...], float] = {}
    while heap:
        diam, path = heapq.heappop(heap)
        tip = path[-1]
        if tip == yi:
            return diam
        for nb in sorted(g.neighbors(tip)):
            if nb in path:
                continue
            cells = path + (nb,)
            d = diam
            for c in cells[:-1]:
                d = max(d, math.dist(pts[c], pts[nb]))
            key = tuple(sorted(cells))
            if key in seen and seen[key] <= d:
                continue
            seen[key] = d
            heapq.heappush(heap, (d, cells))
    return math.inf


def test_full_rectangle_staircase_is_euclidean():
    mask = np.ones((3, 3), dtype=bool)
    d = domain_from_mask(mask, spacing=0.5)
    a = d.ids_of_cells(np.array([(0, 0)]))[0]
    b = d.ids_of_cells(np.array([(2, 2)]))[0]
    assert brute_force_oracle(d, a, b) == pytest.approx(2 * math.sqrt(2) * 0.5)


def test_wall_detour_is_sqrt13():
    mask = np.ones((7, 4), dtype=bool)
    mask[3, 0:3] = False
    d = domain_from_mask(mask, spacing=0.25)
    a = d.ids_of_cells(np.array([(2, 0)]))[0]
    b = d.ids_of_cells(np.array([(4, 0)]))[0]
    assert brute_force_oracle(d, a, b) == pytest.approx(math.sqrt(13) * 0.25)


def test_adjacent_and_degenerate_cases():
    mask = np.ones((2, 1), dtype=bool)
    d = domain_from_mask(mask, spacing=0.125)
    a, b = d.inside_ids
    assert brute_force_oracle(d, a, b) == pytest.approx(0.125)
    assert brute_force_oracle(d, a, a) == 0.0


def test_disconnected_is_infinite():
    mask = np.zeros((3, 3), dtype=bool)
    mask[0, 0] = mask[2, 2] = True
    d = domain_from_mask(mask)
    a, b = d.inside_ids
    assert brute_force_oracle(d, a, b) == math.inf
    est = mazurkiewicz_distance(d, a, b)
    assert est.lower == math.inf and est.upper == math.inf


def test_oracle_rejects_large_domains():
    mask = np.ones((9, 9), dtype=bool)
    d = domain_from_mask(mask)
    a, b = d.inside_ids[0], d.inside_ids[-1]
    with pytest.raises(TooLarge):
        brute_force_oracle(d, a, b)


def test_oracle_matches_independent_reference():
    rng = np.random.default_rng(404)
    for _ in range(12):
        d = random_small_domain(rng, max_cells=18)
        ids = d.inside_ids
        pick = rng.choice(len(ids), size=2, replace=False)
        a, b = int(ids[pick[0]]), int(ids[pick[1]])
        got = brute_force_oracle(d, a, b)
        want = reference_min_diameter(d, a, b)
        assert got == pytest.approx(want), (d.inside, a, b)


def test_bracket_contains_oracle_with_ratio_guarantee():
    rng = np.random.default_rng(77)
    for _ in range(25):
        d = random_small_domain(rng, max_cells=40)
        ids = d.inside_ids
        pick = rng.choice(len(ids), size=2, replace=False)
        a, b = int(ids[pick[0]]), int(ids[pick[1]])
        exact = brute_force_oracle(d, a, b)
        est = mazurkiewicz_distance(d, a, b)
        assert est.lower <= exact + 1e-9
        assert exact <= est.upper + 1e-9
        assert est.upper <= 2 * est.lower + 4 * d.spacing + 1e-9
        assert est.lower >= math.dist(
            d.centers_of(np.array([a]))[0], d.centers_of(np.array([b]))[0]
        ) - 1e-9


def test_set_distance_matches_pairwise_oracle():
    rng = np.random.default_rng(505)
    for _ in range(10):
        d = random_small_domain(rng, max_cells=24)
        ids = d.inside_ids
        if len(ids) < 4:
            continue
        k = len(ids) // 3
        perm = rng.permutation(len(ids))
        a_ids = np.sort(ids[perm[:k]])
        b_ids = np.sort(ids[perm[k : 2 * k]])
        A = Region(d, a_ids)
        B = Region(d, b_ids)
        exact = min(
            brute_force_oracle(d, int(x), int(y))
            for x in a_ids
            for y in b_ids
        )
        est = mazurkiewicz_set_distance(d, A, B)
        assert est.lower <= exact + 1e-9
        assert exact <= est.upper + 1e-9


def test_set_distance_intersecting_is_zero():
    mask = np.ones((4, 4), dtype=bool)
    d = domain_from_mask(mask)
    ids = d.inside_ids
    A = Region(d, ids[:8])
    B = Region(d, ids[6:])
    est = mazurkiewicz_set_distance(d, A, B)
    assert est.lower == 0.0 and est.upper == 0.0


def test_point_distance_dominates_ambient():
    mask = np.ones((5, 5), dtype=bool)
    mask[2, 1:] = False  # spiral-ish wall forces a detour
    d = domain_from_mask(mask, spacing=1.0)
    a = d.ids_of_cells(np.array([(1, 2)]))[0]
    b = d.ids_of_cells(np.array([(3, 2)]))[0]
    exact = brute_force_oracle(d, a, b)
    assert exact > 2.0 + 1e-9  # strictly above the ambient distance
    est = mazurkiewicz_distance(d, a, b)
    assert est.lower <= exact <= est.upper
