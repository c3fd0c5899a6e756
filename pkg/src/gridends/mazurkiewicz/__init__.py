"""Mazurkiewicz distance estimation with certified brackets."""

from gridends.mazurkiewicz.bracket import (
    IntervalEstimate,
    join_radius_field,
    mazurkiewicz_distance,
    mazurkiewicz_set_distance,
)
from gridends.mazurkiewicz.oracle import brute_force_oracle
from gridends.mazurkiewicz.turning import (
    BoundedTurningReport,
    bounded_turning_constant,
)

__all__ = [
    "BoundedTurningReport",
    "IntervalEstimate",
    "bounded_turning_constant",
    "brute_force_oracle",
    "join_radius_field",
    "mazurkiewicz_distance",
    "mazurkiewicz_set_distance",
]
