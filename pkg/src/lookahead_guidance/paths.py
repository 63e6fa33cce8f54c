"""Planar path models and closest-point (Frenet frame) queries.

Supported path shapes are straight lines, circles, and ellipses. Every query
answers in a local tangent/normal frame at the closest path point: the normal
is always the tangent rotated +90 degrees, so for counter-clockwise circles
and ellipses it points toward the interior. The signed cross-track error is
the projection of the vehicle offset onto that normal.

Sign conventions
----------------
* curvature is positive where the path turns toward the +90-degree normal,
  so counter-clockwise traversal gives positive curvature;
* line paths are parameterised by arc length from the anchor, circles and
  ellipses by the central parametric angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import AmbiguousProjection

CCW = "ccw"
CW = "cw"

# Tie tolerance (m) between distinct closest-point candidates.
_TIE_TOL = 1e-9

_NEWTON_MAX_ITER = 50
_NEWTON_SEEDS = (0.25 * math.pi, 0.75 * math.pi, 1.25 * math.pi, 1.75 * math.pi)
_NEWTON_TOL = 1e-10
_NEWTON_STEP_CLAMP = 0.5


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"expected a planar point, got shape {a.shape}")
    return a


def _rot90(v: np.ndarray) -> np.ndarray:
    """Rotate a planar vector by +90 degrees."""
    return np.array([-v[1], v[0]])


@dataclass(frozen=True, eq=False)
class StraightLine:
    """Infinite line through ``anchor`` with unit tangent ``direction``."""

    anchor: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "anchor", _as_point(self.anchor))
        object.__setattr__(self, "direction", _as_point(self.direction))
        norm = float(np.hypot(*self.direction))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector (|1 - norm| <= 1e-12)")

    def __eq__(self, other):
        return (
            isinstance(other, StraightLine)
            and np.array_equal(self.anchor, other.anchor)
            and np.array_equal(self.direction, other.direction)
        )


@dataclass(frozen=True, eq=False)
class Circle:
    """Circle of positive ``radius`` traversed counter-clockwise or clockwise."""

    center: np.ndarray
    radius: float
    traversal: str = CCW

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        if not self.radius > 0.0:
            raise ValueError("radius must be strictly positive")
        if self.traversal not in (CCW, CW):
            raise ValueError(f"traversal must be '{CCW}' or '{CW}'")

    def __eq__(self, other):
        return (
            isinstance(other, Circle)
            and np.array_equal(self.center, other.center)
            and self.radius == other.radius
            and self.traversal == other.traversal
        )


@dataclass(frozen=True, eq=False)
class Ellipse:
    """Axis-aligned ellipse with semi-axes ``a >= b > 0``."""

    center: np.ndarray
    a: float
    b: float
    traversal: str = CCW

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("semi-axes must be strictly positive")
        if self.a < self.b:
            raise ValueError("semi-major axis a must satisfy a >= b")
        if self.traversal not in (CCW, CW):
            raise ValueError(f"traversal must be '{CCW}' or '{CW}'")

    def __eq__(self, other):
        return (
            isinstance(other, Ellipse)
            and np.array_equal(self.center, other.center)
            and self.a == other.a
            and self.b == other.b
            and self.traversal == other.traversal
        )


PathModel = Union[StraightLine, Circle, Ellipse]


@dataclass(frozen=True)
class PathProjection:
    """Closest-point answer in the local tangent frame.

    Attributes
    ----------
    closest_point : ndarray, shape (2,)
        Closest point ``O`` on the path.
    path_parameter : float
        Arc length from the anchor (lines) or central parametric angle
        (circles/ellipses) at ``O``.
    tangent_angle : float
        Direction of the path tangent at ``O`` in radians.
    curvature : float
        Signed curvature at ``O``; positive toward the +90-degree normal.
    cross_track : float
        Signed distance from the path, ``(P - O) . normal``.
    normal : ndarray, shape (2,)
        Unit normal, the tangent rotated +90 degrees.
    """

    closest_point: np.ndarray
    path_parameter: float
    tangent_angle: float
    curvature: float
    cross_track: float
    normal: np.ndarray

    @property
    def tangent(self) -> np.ndarray:
        return np.array([math.cos(self.tangent_angle), math.sin(self.tangent_angle)])


def _ellipse_curvature(a: float, b: float, t: float) -> float:
    den = (a * a * math.sin(t) ** 2 + b * b * math.cos(t) ** 2) ** 1.5
    return a * b / den


def _ellipse_newton(a: float, b: float, rel: np.ndarray, seed: float):
    """Newton iteration on the orthogonality residual f(t) = (P - E(t)) . E'(t).

    Iterates until the step stalls at machine precision, then accepts the
    root only if the residual meets the convergence tolerance. Returns the
    parametric angle or None.
    """
    t = seed
    f = math.inf
    scale = 1.0
    for _ in range(_NEWTON_MAX_ITER):
        ct, st = math.cos(t), math.sin(t)
        ex, ey = a * ct, b * st
        epx, epy = -a * st, b * ct
        rx, ry = rel[0] - ex, rel[1] - ey
        f = rx * epx + ry * epy
        scale = (1.0 + math.hypot(rx, ry)) * math.hypot(epx, epy)
        # f'(t) = -|E'|^2 + (P - E) . E''
        fp = -(epx * epx + epy * epy) + (rx * -ex + ry * -ey)
        if fp == 0.0:
            break
        step = f / fp
        step = max(-_NEWTON_STEP_CLAMP, min(_NEWTON_STEP_CLAMP, step))
        t -= step
        if abs(step) <= 1e-14 * (1.0 + abs(t)):
            # Recompute the residual at the final angle before accepting.
            ct, st = math.cos(t), math.sin(t)
            rx, ry = rel[0] - a * ct, rel[1] - b * st
            f = rx * -a * st + ry * b * ct
            scale = (1.0 + math.hypot(rx, ry)) * math.hypot(a * st, b * ct)
            break
    if abs(f) <= _NEWTON_TOL * scale:
        return t
    return None


def _project_ellipse(path: Ellipse, position: np.ndarray) -> tuple[float, float]:
    """Return (parametric angle, distance) of the global closest point."""
    rel = position - path.center
    if np.hypot(*rel) < _TIE_TOL:
        raise AmbiguousProjection("position coincides with the ellipse center")

    candidates: list[tuple[float, float]] = []  # (distance, angle)
    seeds = _NEWTON_SEEDS + (math.atan2(path.a * rel[1], path.b * rel[0]),)
    for seed in seeds:
        t = _ellipse_newton(path.a, path.b, rel, seed)
        if t is None:
            continue
        t = math.atan2(math.sin(t), math.cos(t))
        e = np.array([path.a * math.cos(t), path.b * math.sin(t)])
        candidates.append((float(np.hypot(*(rel - e))), t))
    if not candidates:  # pragma: no cover - seeds always yield at least one root
        raise AmbiguousProjection("closest-point iteration failed to converge")

    candidates.sort()
    best_dist, best_t = candidates[0]
    best_point = np.array([path.a * math.cos(best_t), path.b * math.sin(best_t)])
    for dist, t in candidates[1:]:
        point = np.array([path.a * math.cos(t), path.b * math.sin(t)])
        if np.hypot(*(point - best_point)) <= 1e-6:
            continue  # same root reached from two seeds
        if dist - best_dist <= _TIE_TOL:
            raise AmbiguousProjection(
                f"two closest-point candidates tie within {_TIE_TOL} m"
            )
        break  # candidates sorted; farther ones cannot tie
    return best_t, best_dist


def project_onto_path(path: PathModel, position) -> PathProjection:
    """Project a position onto the path, returning the local frame at the result.

    Parameters
    ----------
    path : PathModel
        Line, circle, or ellipse.
    position : array_like, shape (2,)
        Finite query point.

    Returns
    -------
    PathProjection
        Global minimiser of the distance to the path with tangent, signed
        curvature, and signed cross-track error at that point.

    Raises
    ------
    AmbiguousProjection
        When two candidate points tie within 1e-9 m (circle/ellipse centers,
        points on the interior major axis of an ellipse).
    """
    position = _as_point(position)
    if not np.all(np.isfinite(position)):
        raise ValueError("position must be finite")

    if isinstance(path, StraightLine):
        along = float((position - path.anchor) @ path.direction)
        closest = path.anchor + along * path.direction
        tangent = path.direction
        normal = _rot90(tangent)
        return PathProjection(
            closest_point=closest,
            path_parameter=along,
            tangent_angle=math.atan2(tangent[1], tangent[0]),
            curvature=0.0,
            cross_track=float((position - closest) @ normal),
            normal=normal,
        )

    if isinstance(path, Circle):
        rel = position - path.center
        dist = float(np.hypot(*rel))
        if dist < _TIE_TOL:
            raise AmbiguousProjection("position coincides with the circle center")
        theta = math.atan2(rel[1], rel[0])
        closest = path.center + path.radius * rel / dist
        radial = rel / dist
        if path.traversal == CCW:
            tangent = _rot90(radial)
            curvature = 1.0 / path.radius
        else:
            tangent = -_rot90(radial)
            curvature = -1.0 / path.radius
        normal = _rot90(tangent)
        return PathProjection(
            closest_point=closest,
            path_parameter=theta,
            tangent_angle=math.atan2(tangent[1], tangent[0]),
            curvature=curvature,
            cross_track=float((position - closest) @ normal),
            normal=normal,
        )

    if isinstance(path, Ellipse):
        t, _ = _project_ellipse(path, position)
        closest = path.center + np.array(
            [path.a * math.cos(t), path.b * math.sin(t)]
        )
        velocity = np.array([-path.a * math.sin(t), path.b * math.cos(t)])
        tangent = velocity / np.hypot(*velocity)
        curvature = _ellipse_curvature(path.a, path.b, t)
        if path.traversal == CW:
            tangent = -tangent
            curvature = -curvature
        normal = _rot90(tangent)
        return PathProjection(
            closest_point=closest,
            path_parameter=t,
            tangent_angle=math.atan2(tangent[1], tangent[0]),
            curvature=curvature,
            cross_track=float((position - closest) @ normal),
            normal=normal,
        )

    raise TypeError(f"unsupported path model: {type(path).__name__}")


def curvature_at(path: PathModel, path_parameter: float) -> float:
    """Signed curvature at a path parameter (arc length or parametric angle)."""
    if isinstance(path, StraightLine):
        return 0.0
    if isinstance(path, Circle):
        k = 1.0 / path.radius
        return k if path.traversal == CCW else -k
    if isinstance(path, Ellipse):
        k = _ellipse_curvature(path.a, path.b, path_parameter)
        return k if path.traversal == CCW else -k
    raise TypeError(f"unsupported path model: {type(path).__name__}")


def tangent_point_at_offset(projection: PathProjection, s: float) -> np.ndarray:
    """Point reached by advancing ``s >= 0`` meters along the tangent at ``O``."""
    if s < 0.0:
        raise ValueError("tangent offset s must be nonnegative")
    return projection.closest_point + s * projection.tangent
