"""Exception types raised across the guidance toolkit."""


class GuidanceError(Exception):
    """Base class for all toolkit-specific errors."""


class ProjectionFailure(GuidanceError):
    """Closest-point projection onto the path could not be resolved."""


class AmbiguousProjection(ProjectionFailure):
    """Two or more closest-point candidates tie; caller must perturb or reject."""


class InfeasibleGeometry(GuidanceError):
    """Target construction is ill-posed (the tangent advance 1 + d*kappa <= 0)."""


class ZeroVector(GuidanceError):
    """An angle was requested between vectors of (near-)zero length."""


class DegenerateBaseline(GuidanceError):
    """Relative gain is undefined because the baseline envelope area is zero."""


class BoundUndefined(GuidanceError):
    """An analytic bound is undefined for the given geometry (arcsin out of range)."""


class RunawayDivergence(GuidanceError):
    """Simulated cross-track error grew far beyond its initial magnitude."""


class ParseError(GuidanceError):
    """Configuration document is malformed or contains unknown sections/keys."""


class ValidationError(GuidanceError):
    """Configuration parsed but violates an invariant; message names the key."""
