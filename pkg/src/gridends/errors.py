"""Exception vocabulary shared by all gridends modules.

Every error raised by the library is one of these classes, so callers can
catch ``GridendsError`` and report failures uniformly.
"""

from __future__ import annotations


class GridendsError(Exception):
    """Base class for all library errors."""


class SpacingTooCoarse(GridendsError):
    """A declared feature gap of the domain spec is below 3 grid spacings."""


class UnknownGenerator(GridendsError):
    """The domain spec names a generator that is not registered."""


class BadParams(GridendsError):
    """Generator parameters are missing, malformed, or out of range."""


class EmptyRegion(GridendsError):
    """An operation that needs cells received a region without any."""


class Disconnected(GridendsError):
    """Two cells or regions lie in different components of the domain."""


class TooLarge(GridendsError):
    """An exhaustive oracle was asked to run beyond its enumeration bound."""


class RadiusUnresolvable(GridendsError):
    """A requested analysis radius is below what the grid can resolve."""


class EmptyImpression(GridendsError):
    """The finite-depth impression of a chain has no cells.

    At finite depth this is how an end at infinity (empty limit impression)
    presents itself, so classification code catches this error.
    """


class CertificateNotFound(GridendsError):
    """No separator certificate with the required properties was found."""


class InteriorEmpty(GridendsError):
    """A chain link has no interior cells at the current spacing."""


class DomainViolation(GridendsError):
    """A map was evaluated at a point outside its domain of definition."""


class Degenerate(GridendsError):
    """A region pair fails the nondegeneracy floor needed by the operation."""


class NoCurves(GridendsError):
    """A curve family is empty; reported when modulus cannot be positive."""
