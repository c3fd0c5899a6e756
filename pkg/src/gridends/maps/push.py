"""Pushing chains through a map and checking what survives."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from gridends.errors import BadParams, DomainViolation, EmptyImpression
from gridends.grids.domain import BoundaryAnchor
from gridends.maps.specs import Correspondence, MapSpec
from gridends.prime_ends.chains import (
    Chain,
    divides,
    impression,
    validate_chain,
)


def push_chain(spec: MapSpec, corr: Correspondence, chain: Chain) -> Chain:
    """Image chain of a chain, link by link, with a fresh validation.

    Each link is pushed through the correspondence and the image chain is
    revalidated from scratch on the image domain: nothing is inherited
    from the source report. Links whose cells all land outside the image
    come through empty and show up as failed checks rather than errors.
    The anchor is pushed when its image is still a usable boundary point.
    """
    if spec.name != corr.map.name:
        raise BadParams(
            f"correspondence belongs to {corr.map.name}, not {spec.name}"
        )
    links = tuple(corr.push_region(link) for link in chain.links)
    anchor = None
    if chain.anchor is not None:
        try:
            px, py = spec.evaluate(
                np.array([chain.anchor.point], dtype=np.float64)
            )[0]
            anchor = BoundaryAnchor(corr.image, (float(px), float(py)))
        except (BadParams, DomainViolation):
            anchor = None
    pushed = Chain(
        domain=corr.image, links=links, radii=None, anchor=anchor
    )
    rep = validate_chain(corr.image, pushed)
    try:
        imp = impression(corr.image, pushed)
    except EmptyImpression:
        imp = None
    return replace(pushed, report=rep, impression=imp)


@dataclass(frozen=True, eq=False)
class ExtensionReport:
    """How much end structure survives a pushforward, at this scale.

    Counts are over the supplied source chains: ordered pairs that divide,
    unordered pairs that are equivalent (divide each other), and chains
    with singleton impressions, each with how many still do after
    pushing. A clean sheet is consistency at the sampled scale, not a
    proof of extension.
    """

    n_chains: int
    divisible_pairs: int
    divisible_preserved: int
    equivalent_pairs: int
    equivalent_preserved: int
    singleton_chains: int
    singleton_preserved: int
    image_chains: tuple[Chain, ...]

    @property
    def all_passed(self) -> bool:
        return (
            self.divisible_preserved == self.divisible_pairs
            and self.equivalent_preserved == self.equivalent_pairs
            and self.singleton_preserved == self.singleton_chains
        )


def extension_consistency(
    spec: MapSpec, corr: Correspondence, chains: list[Chain]
) -> ExtensionReport:
    """Push chains and count which divisibility facts still hold.

    Divisibility is checked over ordered pairs of distinct chains,
    equivalence over unordered ones; a source singleton impression is
    preserved when the image impression exists and is again a singleton.
    """
    if not chains:
        raise BadParams("need at least one chain")
    pushed = [push_chain(spec, corr, c) for c in chains]
    div_pairs = 0
    div_kept = 0
    eq_pairs = 0
    eq_kept = 0
    n = len(chains)
    src_div = np.zeros((n, n), dtype=bool)
    img_div = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            src_div[i, j] = divides(chains[i].domain, chains[i], chains[j])
            img_div[i, j] = divides(corr.image, pushed[i], pushed[j])
            if src_div[i, j]:
                div_pairs += 1
                div_kept += int(img_div[i, j])
    for i in range(n):
        for j in range(i + 1, n):
            if src_div[i, j] and src_div[j, i]:
                eq_pairs += 1
                eq_kept += int(img_div[i, j] and img_div[j, i])
    singles = [
        c for c in chains if c.impression is not None and c.impression.singleton
    ]
    kept = 0
    for c, p in zip(chains, pushed):
        if c.impression is None or not c.impression.singleton:
            continue
        kept += int(p.impression is not None and p.impression.singleton)
    return ExtensionReport(
        n_chains=n,
        divisible_pairs=div_pairs,
        divisible_preserved=div_kept,
        equivalent_pairs=eq_pairs,
        equivalent_preserved=eq_kept,
        singleton_chains=len(singles),
        singleton_preserved=kept,
        image_chains=tuple(pushed),
    )
