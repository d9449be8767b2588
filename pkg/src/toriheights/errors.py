"""Exception hierarchy.

Every domain error derives from :class:`ToriHeightsError`; the command line
prints the class name and exits with status 1 when one escapes.
"""


class ToriHeightsError(Exception):
    """Base class for all domain errors."""


class ParseError(ToriHeightsError):
    pass


# lattice
class DimensionMismatch(ToriHeightsError):
    pass


# fan
class NotPrimitive(ToriHeightsError):
    pass


class NotRegular(ToriHeightsError):
    pass


class NotComplete(ToriHeightsError):
    pass


class BadIntersection(ToriHeightsError):
    pass


class NonIntegralCoordinates(ToriHeightsError):
    pass


# galois
class NotUnimodular(ToriHeightsError):
    pass


class FanNotInvariant(ToriHeightsError):
    pass


class GroupTooLarge(ToriHeightsError):
    pass


class NotFiniteOrder(ToriHeightsError):
    pass


class NonCyclicGroup(ToriHeightsError):
    pass


class NotAnisotropic(ToriHeightsError):
    pass


class TorsionInPicard(ToriHeightsError):
    pass


# sr_ring
class PolynomialityCheckFailed(ToriHeightsError):
    pass


# conechar
class NotPointed(ToriHeightsError):
    pass


class NotFullDimensional(ToriHeightsError):
    pass


class PoleHit(ToriHeightsError):
    pass


class AnticanonicalOnBoundary(ToriHeightsError):
    pass


class ClassNotInterior(ToriHeightsError):
    pass


# heightzeta
class DivergentFactor(ToriHeightsError):
    pass


# enumeration
class NotOnVariety(ToriHeightsError):
    pass


class BoundTooLarge(ToriHeightsError):
    pass


class InsufficientData(ToriHeightsError):
    pass
