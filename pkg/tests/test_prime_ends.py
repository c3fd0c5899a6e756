"""Tests for scale trees, chains, impressions, and end classification."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridends.errors import (
    CertificateNotFound,
    InteriorEmpty,
    RadiusUnresolvable,
)
from gridends.grids.domain import BoundaryAnchor, DomainSpec, Region
from gridends.grids.generators import rasterize
from gridends.grids.ops import ball, component_containing, components
from gridends.prime_ends.chains import (
    Chain,
    divides,
    enumerate_prime_end_approximations,
    impression,
    open_refinement,
    validate_chain,
)
from gridends.prime_ends.classify import classify_end
from gridends.prime_ends.connectivity import (
    ends_at_infinity,
    finite_connectivity_check,
    growth_witness,
)
from gridends.prime_ends.tree import scale_component_tree

from conftest import domain_from_mask, random_small_domain

GROWTH_LADDER = (1.15, 0.9, 0.65, 0.43, 0.21)


def slab_chain(domain, levels):
    """Largest component of the domain below each height, as a chain."""
    ys = (np.arange(domain.ny) + 0.5) * domain.spacing + domain.window[1]
    links = []
    for level in levels:
        sub = Region.from_mask(domain, domain.inside & (ys[None, :] < level))
        links.append(max(components(domain, sub), key=len))
    return Chain(domain=domain, links=tuple(links))


@pytest.fixture(scope="module")
def comb_256():
    return rasterize(
        DomainSpec("harmonic_comb", truncation=4, window=(0, 0, 1, 1)), 1 / 256
    )


@pytest.fixture(scope="module")
def strip_64():
    return rasterize(
        DomainSpec("strip_with_slits", truncation=4, window=(0, 0, 6, 1)),
        1 / 64,
    )


def test_disk_anchor_gives_one_singleton_chain(disk_64):
    h = disk_64.spacing
    for angle in (0.0, math.pi / 2, 5 * math.pi / 8):
        anchor = BoundaryAnchor(
            disk_64, (math.cos(angle), math.sin(angle))
        )
        tree = scale_component_tree(disk_64, anchor, r0=96 * h, depth=6)
        chains = enumerate_prime_end_approximations(tree)
        assert len(chains) == 1
        (chain,) = chains
        assert chain.report is not None and chain.report.valid
        assert chain.report.nested
        assert all(chain.report.separated)
        assert chain.impression is not None and chain.impression.singleton
        out = classify_end(disk_64, chain)
        assert out.kind == "A"
        assert out.singleton is True
        assert not out.escapes_window


def test_tree_rejects_unresolvable_radii(disk_64):
    anchor = BoundaryAnchor(disk_64, (1.0, 0.0))
    with pytest.raises(RadiusUnresolvable):
        scale_component_tree(disk_64, anchor, r0=10 * disk_64.spacing, depth=6)
    with pytest.raises(RadiusUnresolvable):
        scale_component_tree(disk_64, anchor, r0=0.0, depth=3)
    with pytest.raises(RadiusUnresolvable):
        scale_component_tree(disk_64, anchor, r0=1.0, depth=-1)


def test_anchor_beyond_clipped_edge_sees_nothing(comb_256):
    # The window keeps teeth resolvable by starting right of x = 0, so a
    # tooth-limit anchor at the true prime-end location is out of reach.
    anchor = BoundaryAnchor(comb_256, (0.0, 0.25))
    tree = scale_component_tree(comb_256, anchor, r0=0.375, depth=2)
    assert all(len(level) == 0 for level in tree.levels)
    assert tree.leaves() == ()
    assert enumerate_prime_end_approximations(tree) == []


def test_slit_sides_are_two_nondividing_chains(slit_disk_128):
    h = slit_disk_128.spacing
    anchor = BoundaryAnchor(slit_disk_128, (0.5, 0.0))
    tree = scale_component_tree(slit_disk_128, anchor, r0=96 * h, depth=6)
    chains = enumerate_prime_end_approximations(tree)
    assert len(chains) == 2
    for chain in chains:
        assert chain.report is not None and chain.report.valid
        assert chain.impression is not None and chain.impression.singleton
    first, second = chains
    assert not divides(slit_disk_128, first, second)
    assert not divides(slit_disk_128, second, first)
    # Both impressions land on the slit, overlapping on shared slit cells
    # without being equal: distinct ends over one boundary point set.
    cells_a = {tuple(c) for c in first.impression.cells}
    cells_b = {tuple(c) for c in second.impression.cells}
    assert len(cells_a & cells_b) == 2
    assert cells_a != cells_b


def test_slit_tip_is_a_single_chain(slit_disk_128):
    h = slit_disk_128.spacing
    anchor = BoundaryAnchor(slit_disk_128, (0.0, 0.0))
    tree = scale_component_tree(slit_disk_128, anchor, r0=96 * h, depth=6)
    chains = enumerate_prime_end_approximations(tree)
    assert len(chains) == 1
    assert chains[0].report.valid
    assert chains[0].impression.singleton


def test_divides_is_reflexive_and_respects_refinement(disk_64):
    anchor = BoundaryAnchor(disk_64, (1.0, 0.0))
    tree = scale_component_tree(disk_64, anchor, r0=1.5, depth=6)
    (chain,) = enumerate_prime_end_approximations(tree)
    assert divides(disk_64, chain, chain)
    # The deepest links are boundary-hugging slivers with no interior, so
    # refine a truncation that still has room inside every link.
    stub = Chain(domain=disk_64, links=chain.links[:4])
    refined = open_refinement(disk_64, stub)
    assert divides(disk_64, refined, stub)
    for thin, fat in zip(refined.links, stub.links):
        assert thin.is_subset(fat)


def test_open_refinement_needs_interior_cells():
    dom = domain_from_mask(np.ones((5, 5), dtype=bool), spacing=1.0)
    strip = np.zeros((5, 5), dtype=bool)
    strip[2, :] = True  # one column: every cell has a neighbor outside it
    link = Region.from_mask(dom, strip)
    with pytest.raises(InteriorEmpty):
        open_refinement(dom, Chain(domain=dom, links=(link,)))


def test_interior_chain_is_bounded_without_impression(unit_square_64):
    links = tuple(
        ball(unit_square_64, (0.5, 0.5), r) for r in (0.3, 0.15)
    )
    chain = Chain(domain=unit_square_64, links=links)
    report = validate_chain(unit_square_64, chain)
    assert report.nested
    assert not report.valid  # sinks nowhere and cannot escape
    out = classify_end(unit_square_64, chain)
    assert out.kind == "A"
    assert out.impression is None
    assert out.singleton is None


def test_validation_flags_non_nested_chain(unit_square_64):
    links = (
        ball(unit_square_64, (0.25, 0.5), 0.2),
        ball(unit_square_64, (0.75, 0.5), 0.2),
    )
    report = validate_chain(
        unit_square_64, Chain(domain=unit_square_64, links=links)
    )
    assert not report.nested
    assert not report.valid


def test_finite_connectivity_fails_at_unreachable_anchor(comb_256):
    anchor = BoundaryAnchor(comb_256, (0.0, 0.25))
    rep = finite_connectivity_check(comb_256, anchor, (3 / 16, 1 / 4))
    assert rep.verdict is False
    assert rep.touching_counts == (0, 0)
    assert rep.component_counts == (1, 2)
    assert rep.covered == (False, False)


def test_finite_connectivity_holds_on_disk(disk_64):
    anchor = BoundaryAnchor(disk_64, (1.0, 0.0))
    rep = finite_connectivity_check(disk_64, anchor, (3 / 16, 1 / 4))
    assert rep.verdict is True
    assert rep.touching_counts == (1, 1)
    assert rep.covered == (True, True)


def test_growth_witness_separates_comb_teeth():
    dom = rasterize(
        DomainSpec("double_comb_fixed", truncation=2, window=(0, 0, 1, 1)),
        1 / 512,
    )
    anchor = BoundaryAnchor(dom, (0.5, 0.0))
    rep = growth_witness(dom, anchor, GROWTH_LADDER, separation=0.1)
    assert rep.separated_count == 2
    assert len(rep.chains) == 2


def test_growth_witness_finds_one_chain_on_disk(disk_64):
    anchor = BoundaryAnchor(disk_64, (1.0, 0.0))
    rep = growth_witness(disk_64, anchor, GROWTH_LADDER, separation=0.1)
    assert rep.separated_count == 1


def test_strip_tail_is_one_escaping_end(strip_64):
    rep = ends_at_infinity(strip_64, (1.5, 0.5), (1.0, 2.0, 3.0, 4.3))
    assert len(rep.ends) == 1
    (end,) = rep.ends
    assert end.classification.kind == "C"
    assert end.validation.valid
    assert end.classification.escapes_window


def test_slab_chain_on_strip_stays_uncertified(strip_64):
    chain = slab_chain(strip_64, (0.25, 0.125))
    out = classify_end(strip_64, chain, strict=False)
    assert out.kind == "B"
    assert out.certified is False
    with pytest.raises(CertificateNotFound) as info:
        classify_end(strip_64, chain, strict=True)
    flat = [r for gap in info.value.results for r in gap]
    assert flat and not any(r.verified for r in flat)


def test_gate_pockets_defeat_every_candidate_separator():
    dom = rasterize(
        DomainSpec(
            "gate_half_plane",
            truncation=1,
            params={"k_max": 3, "gate_height_scale": 0.8},
            window=(-4.5, 0.0, 12.5, 0.75),
        ),
        1 / 128,
    )
    chain = slab_chain(dom, (0.35, 0.25))
    with pytest.raises(CertificateNotFound) as info:
        classify_end(dom, chain)
    flat = {r.name: r for gap in info.value.results for r in gap}
    assert not any(r.verified for r in flat.values())
    # The removed gate itself fails: deleting it reconnects nothing, so it
    # does not separate, and it reaches the clipped frame besides.
    barrier = flat["removed-barrier"]
    assert not barrier.separates
    # A full horizontal wall does separate the slabs but cannot be compact.
    wall = flat["wall-horizontal-full"]
    assert wall.separates and not wall.compact
    # Tight shells stay compact yet fail to separate: pocket bands slip
    # around them through the claw arms.
    shell = flat["shell-B-0.125"]
    assert shell.compact and not shell.separates


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 10_000), st.data())
def test_component_ball_chains_nest_and_self_divide(seed, data):
    rng = np.random.default_rng(seed)
    dom = random_small_domain(rng)
    centers = dom.centers_of(dom.inside_ids)
    pick = data.draw(st.integers(0, len(centers) - 1))
    seed_id = int(dom.inside_ids[pick])
    seed_point = (float(centers[pick, 0]), float(centers[pick, 1]))
    span = max(dom.nx, dom.ny) * dom.spacing
    radii = sorted(
        data.draw(
            st.lists(
                st.floats(0.0, 2.0 * span, allow_nan=False),
                min_size=1,
                max_size=4,
            )
        ),
        reverse=True,
    )
    links = tuple(
        component_containing(dom, seed_id, ball(dom, seed_point, r))
        for r in radii
    )
    chain = Chain(domain=dom, links=links)
    report = validate_chain(dom, chain)
    assert report.nested
    assert divides(dom, chain, chain)


def test_impression_cells_sit_outside_the_domain(slit_disk_128):
    anchor = BoundaryAnchor(slit_disk_128, (0.5, 0.0))
    tree = scale_component_tree(slit_disk_128, anchor, r0=0.75, depth=6)
    for chain in enumerate_prime_end_approximations(tree):
        imp = impression(slit_disk_128, chain)
        assert not slit_disk_128.inside[
            imp.cells[:, 0], imp.cells[:, 1]
        ].any()
        assert imp.connected
