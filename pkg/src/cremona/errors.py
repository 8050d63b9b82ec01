"""Exception hierarchy.  Every error raised on purpose derives from CremonaError."""

from .algebra.grammar import ParseError


class CremonaError(Exception):
    pass


class MapError(CremonaError, ValueError):
    """Invalid map input: inhomogeneous, mismatched degrees, or zero."""


class InhomogeneousComponent(MapError):
    pass


class DegreeMismatch(MapError):
    pass


class ZeroMap(MapError):
    pass


class IndeterminatePoint(CremonaError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"{point} is an indeterminacy point (proper base point)")


class ZeroJacobian(CremonaError):
    """The map is not dominant."""


class NotBirational(CremonaError):
    pass


class FactorizationIncomplete(CremonaError):
    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)


class DegreeCapExceeded(CremonaError):
    def __init__(self, degree, cap):
        self.degree, self.cap = degree, cap
        super().__init__(f"symbolic composition of degree {degree} exceeds the cap {cap}")


class IrrationalBaseLocus(CremonaError):
    """Part of the base locus is not defined over Q."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class NoetherMismatch(CremonaError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"Noether equalities fail: {report.summary()}")


class NotABasePoint(CremonaError):
    pass


class IsBasePoint(CremonaError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"{point} is a base point of the map")


class DepthExceeded(CremonaError):
    pass


class TransportFailure(CremonaError):
    def __init__(self, step, point, cause):
        self.step, self.point, self.cause = step, point, cause
        super().__init__(f"transport failed at step {step} for {point}: {cause}")


__all__ = [
    "CremonaError", "ParseError", "MapError", "InhomogeneousComponent", "DegreeMismatch",
    "ZeroMap", "IndeterminatePoint", "ZeroJacobian", "NotBirational",
    "FactorizationIncomplete", "DegreeCapExceeded", "IrrationalBaseLocus",
    "NoetherMismatch", "NotABasePoint", "IsBasePoint", "DepthExceeded", "TransportFailure",
]
