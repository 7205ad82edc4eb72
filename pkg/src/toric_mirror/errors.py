"""Exception hierarchy.

Every error carries a stable ``kind`` string (the class name) which the
command-line reports serialize as ``error.kind``.
"""

from __future__ import annotations


class ToricMirrorError(Exception):
    """Base class for all library errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


# -- geometry / combinatorics ------------------------------------------------

class GeometryError(ToricMirrorError):
    """Invalid toric input data.

    ``path`` is a JSON pointer into the model file when the error was raised
    during parsing; ``cause`` names the underlying error kind.
    """

    def __init__(self, message: str, path: str = "", cause: str | None = None):
        super().__init__(message)
        self.path = path
        self.cause = cause


class RankDeficient(GeometryError):
    pass


class UnstableCharges(GeometryError):
    """Stability vector fails one of the chamber conditions (a), (b), (c)."""

    def __init__(self, message: str, conditions: dict | None = None):
        super().__init__(message)
        self.conditions = conditions or {}


class NotSmooth(GeometryError):
    pass


class EmptyDivisor(GeometryError):
    pass


class InvalidFan(GeometryError):
    pass


class NoAmpleClass(GeometryError):
    pass


class UnboundedEnumeration(ToricMirrorError):
    pass


class NotInMori(ToricMirrorError):
    pass


# -- rings --------------------------------------------------------------------

class PresentationInconsistent(ToricMirrorError):
    pass


class NormalizationConflict(ToricMirrorError):
    pass


class FieldMismatch(ToricMirrorError):
    pass


# -- series / GKZ -------------------------------------------------------------

class BoundExceeded(ToricMirrorError):
    pass


class NonUnipotent(ToricMirrorError):
    pass


# -- numerics -----------------------------------------------------------------

class DomainError(ToricMirrorError):
    pass


class SplittingFailure(ToricMirrorError):
    pass


class NoDecay(ToricMirrorError):
    pass


class TolNotMet(ToricMirrorError):
    pass


class PoleHit(ToricMirrorError):
    pass


class NotRankOne(ToricMirrorError):
    pass


class DivergenceSuspected(ToricMirrorError):
    pass


# -- input --------------------------------------------------------------------

class SchemaError(ToricMirrorError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


class TruncationWarning(UserWarning):
    """A truncated q-series has not visibly converged.

    ``magnitude`` is the absolute size of the last included q-degree.
    """

    def __init__(self, message: str, magnitude: float):
        super().__init__(message)
        self.magnitude = magnitude
