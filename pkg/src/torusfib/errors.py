"""Exception hierarchy.

Every contract violation raised by the library derives from
:class:`TorusFibError`; the CLI maps these to exit code 1 and echoes the
class name.
"""

from __future__ import annotations


class TorusFibError(Exception):
    """Base class for all library errors."""


# lattice_core
class OriginNotInterior(TorusFibError):
    pass


class NonIntegralDual(TorusFibError):
    pass


class InvalidPolytope(TorusFibError):
    pass


# subdivision
class DomainMismatch(TorusFibError):
    pass


class WallOnBoundary(TorusFibError):
    pass


class NonConvexQuad(TorusFibError):
    pass


class NotRegular(TorusFibError):
    pass


# spine
class NotInduced(TorusFibError):
    pass


class DegenerateCell(TorusFibError):
    pass


# amoeba
class NoRootsFound(TorusFibError):
    pass


class NumericalFailure(TorusFibError):
    pass


class EmptyInput(TorusFibError):
    pass


# flow
class PoleOfS(TorusFibError):
    pass


class HitCriticalSet(TorusFibError):
    pass


class StepLimitExceeded(TorusFibError):
    pass


# monodromy
class UnsupportedType(TorusFibError):
    pass


class CompositeTypeUndefined(TorusFibError):
    pass


# assembly
class LegCountMismatch(TorusFibError):
    pass


class OrientationMismatch(TorusFibError):
    pass


class UntypedVertex(TorusFibError):
    pass


class NonTrivalentVertex(TorusFibError):
    pass


# duality
class InconsistentInput(TorusFibError):
    pass


# transitions
class NotFloppable(TorusFibError):
    pass


class WrongState(TorusFibError):
    pass


class EulerBookkeepingViolated(TorusFibError):
    pass


class InvalidSpec(TorusFibError):
    pass


# local_models
class NotOnVariety(TorusFibError):
    pass


class OnStabilizerLocus(TorusFibError):
    pass


# file formats
class FormatError(TorusFibError):
    pass
