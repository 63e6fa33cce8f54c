"""Look-ahead guidance law: profiles, saturation regions, and commanded acceleration.

The law places a virtual target ahead of the closest path point by a
look-ahead distance (fixed, or growing with the cross-track error), measures
the heading error toward it, and commands the centripetal acceleration of the
circular arc through vehicle and target. Commands are limited by the
vehicle's minimum turn radius; the boundary heading error that keeps the
command turn within that radius splits the error plane into one unsaturated
region (S1) and two saturated ones (S2 above, S3 below).

Scalar formulas in this module are written with numpy ufuncs so they accept
arrays transparently; grid sweeps in :mod:`.envelope` rely on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InfeasibleGeometry, ZeroVector

S1 = "S1"
S2 = "S2"
S3 = "S3"


def normalize_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class ConstantLookahead:
    """Fixed look-ahead distance ``L0 > 0``."""

    L0: float

    def __post_init__(self):
        if not self.L0 > 0.0:
            raise ValueError("L0 must be strictly positive")


@dataclass(frozen=True)
class VariableLookahead:
    """Error-dependent look-ahead ``L_min + (L_max - L_min) * (1 - exp(-|d|/d_c))``.

    The profile is even in ``d``, nondecreasing in ``|d|``, equals ``L_min``
    on the path and saturates at ``L_max`` far from it. ``L_max == L_min``
    degenerates to the constant profile (useful for ratio sweeps).
    """

    L_min: float
    L_max: float
    d_c: float

    def __post_init__(self):
        if not self.L_min > 0.0:
            raise ValueError("L_min must be strictly positive")
        if self.L_max < self.L_min:
            raise ValueError("L_max must satisfy L_max >= L_min")
        if not self.d_c > 0.0:
            raise ValueError("d_c must be strictly positive")


LookaheadProfile = Union[ConstantLookahead, VariableLookahead]


@dataclass(frozen=True)
class GuidanceLimits:
    """Physical limits: speed ``V_u``, minimum turn radius ``R_min``, and an
    optional projection-error cap ``eps_proj`` (None disables the cap)."""

    V_u: float
    R_min: float
    eps_proj: float | None = None

    def __post_init__(self):
        if not self.V_u > 0.0:
            raise ValueError("V_u must be strictly positive")
        if not self.R_min > 0.0:
            raise ValueError("R_min must be strictly positive")
        if self.eps_proj is not None and self.eps_proj < 0.0:
            raise ValueError("eps_proj must be nonnegative")

    @property
    def max_accel(self) -> float:
        """Largest commandable lateral acceleration, V_u^2 / R_min."""
        return self.V_u**2 / self.R_min


@dataclass(frozen=True)
class TrackingGeometry:
    """Instantaneous tracking state: cross-track ``d``, local path curvature
    ``kappa``, and signed heading error ``eta`` in (-pi, pi]."""

    d: float
    kappa: float
    eta: float


@dataclass(frozen=True)
class GuidanceCommand:
    """One evaluation of the guidance law with all intermediate quantities."""

    L0_eff: float
    s: float
    L1: float
    eta_bar: float
    region: str
    a_d: float
    curvature_cmd: float
    saturated: bool


def lookahead(profile: LookaheadProfile, d):
    """Evaluate the look-ahead distance at cross-track error ``d``."""
    if isinstance(profile, ConstantLookahead):
        return profile.L0 if np.isscalar(d) else np.full_like(np.asarray(d, float), profile.L0)
    return profile.L_min + (profile.L_max - profile.L_min) * (
        1.0 - np.exp(-np.abs(d) / profile.d_c)
    )


def lookahead_slope(profile: LookaheadProfile, d):
    """Derivative of the look-ahead profile; zero at d = 0 by evenness."""
    if isinstance(profile, ConstantLookahead):
        return 0.0 if np.isscalar(d) else np.zeros_like(np.asarray(d, float))
    return (
        (profile.L_max - profile.L_min)
        / profile.d_c
        * np.exp(-np.abs(d) / profile.d_c)
        * np.sign(d)
    )


def lookahead_far_limit(profile: LookaheadProfile) -> float:
    """Limit of the look-ahead distance far from the path."""
    if isinstance(profile, ConstantLookahead):
        return profile.L0
    return profile.L_max


def tangent_advance(L0_eff, d, kappa, limits: GuidanceLimits):
    """Distance ``s`` to advance the virtual target along the tangent.

    ``s = L0_eff * sqrt(1 + d*kappa)``; when the projection-error cap is
    enabled and the path is curved, ``s`` is additionally limited to
    ``sqrt(2*eps_proj/|kappa|)`` so the tangent-line target stays within
    ``eps_proj`` of the true path point.
    """
    margin = 1.0 + np.multiply(d, kappa)
    if np.any(margin <= 0.0):
        raise InfeasibleGeometry("tangent advance requires 1 + d*kappa > 0")
    s = L0_eff * np.sqrt(margin)
    if limits.eps_proj is not None:
        cap = np.where(
            np.equal(kappa, 0.0),
            np.inf,
            np.sqrt(2.0 * limits.eps_proj / np.maximum(np.abs(kappa), 1e-300)),
        )
        s = np.minimum(s, cap)
    if np.isscalar(L0_eff) and np.isscalar(d):
        return float(s)
    return s


def projection_error_bound(s, kappa):
    """Leading-order bound on the tangent-target offset from the path, |kappa| s^2 / 2."""
    return np.abs(kappa) * np.square(s) / 2.0


def los_length(L0_eff, d, kappa):
    """Line-of-sight length ``L1 = sqrt(d^2 + L0_eff^2 * (1 + d*kappa))``."""
    margin = 1.0 + np.multiply(d, kappa)
    if np.any(margin <= 0.0):
        raise InfeasibleGeometry("LOS length requires 1 + d*kappa > 0")
    return np.sqrt(np.square(d) + np.square(L0_eff) * margin)


def heading_error(velocity, los) -> float:
    """Signed angle from the velocity vector to the line-of-sight vector.

    Uses the two-argument arctangent of the planar cross and dot products, so
    the full range (-pi, pi] is available (an arcsine of the cross product
    alone would fold angles beyond +-pi/2).
    """
    v = np.asarray(velocity, dtype=float)
    l = np.asarray(los, dtype=float)
    if np.hypot(v[0], v[1]) < 1e-12 or np.hypot(l[0], l[1]) < 1e-12:
        raise ZeroVector("heading error needs nonzero velocity and LOS vectors")
    cross = v[0] * l[1] - v[1] * l[0]
    dot = v[0] * l[0] + v[1] * l[1]
    return normalize_angle(math.atan2(cross, dot))


def saturation_boundary(L1, limits: GuidanceLimits):
    """Largest heading error whose command stays within the turn capability.

    ``arcsin(min(1, L1/(2*R_min)))``, in (0, pi/2]; the clamp activates once
    the LOS is long enough that no heading error can saturate the turn.
    """
    return np.arcsin(np.minimum(1.0, np.divide(L1, 2.0 * limits.R_min)))


def classify_region(geom: TrackingGeometry, eta_bar: float) -> str:
    """Assign the state to S1 (|eta| <= eta_bar, closed), S2 (above), or S3 (below)."""
    if abs(geom.eta) <= eta_bar:
        return S1
    return S2 if geom.eta > eta_bar else S3


def _command(L0_eff: float, s: float, L1: float, eta: float,
             limits: GuidanceLimits) -> GuidanceCommand:
    """Assemble the guidance command for precomputed target geometry."""
    eta_bar = float(saturation_boundary(L1, limits))
    region = S1 if abs(eta) <= eta_bar else (S2 if eta > eta_bar else S3)
    if region == S1:
        a_d = 2.0 * limits.V_u**2 * math.sin(eta) / L1
    else:
        a_d = 2.0 * limits.V_u**2 * math.sin(eta_bar) / L1 * math.copysign(1.0, eta)
    a_max = limits.max_accel
    a_d = min(a_max, max(-a_max, a_d))
    return GuidanceCommand(
        L0_eff=L0_eff,
        s=s,
        L1=L1,
        eta_bar=eta_bar,
        region=region,
        a_d=a_d,
        curvature_cmd=a_d / limits.V_u**2,
        saturated=region != S1,
    )


def lateral_accel(geom: TrackingGeometry, profile: LookaheadProfile,
                  limits: GuidanceLimits) -> GuidanceCommand:
    """Evaluate the guidance law at a tracking state.

    Parameters
    ----------
    geom : TrackingGeometry
        Cross-track error, local curvature, and heading error.
    profile : LookaheadProfile
        Constant or variable look-ahead profile.
    limits : GuidanceLimits
        Speed, turn capability, and optional projection cap.

    Returns
    -------
    GuidanceCommand
        In S1 the command is ``2 V_u^2 sin(eta) / L1``; in S2/S3 its
        magnitude is held at the boundary value ``2 V_u^2 sin(eta_bar) / L1``
        with the sign of ``eta``; either way it is clamped to
        ``+-V_u^2/R_min``. All intermediate quantities are recorded.

    Raises
    ------
    InfeasibleGeometry
        When ``1 + d*kappa <= 0`` and no target can be placed ahead.
    """
    L0_eff = float(lookahead(profile, geom.d))
    s = float(tangent_advance(L0_eff, geom.d, geom.kappa, limits))
    # |T' - P| with T' = O + s*tangent and (P - O) orthogonal to the tangent;
    # equals los_length exactly when the projection cap is inactive.
    L1 = math.hypot(geom.d, s)
    return _command(L0_eff, s, L1, geom.eta, limits)


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the target-construction feasibility test with both clauses."""

    feasible: bool
    arc_margin: float        # 1 + d*kappa
    target_ahead: bool       # arc_margin > 0
    L1: float                # nan when the target cannot be placed
    reach_limit: float       # 2R - d with R = 1/|kappa| (inf for kappa = 0)
    within_reach: bool       # L1 <= reach_limit


def feasibility_check(d: float, kappa: float,
                      profile: LookaheadProfile) -> FeasibilityResult:
    """Test whether the virtual target construction is well posed at (d, kappa).

    Requires the target to lie ahead (``1 + d*kappa > 0``) and, on curved
    paths, the LOS to stay within the local arc (``L1 <= 2R - d`` with
    ``R = 1/|kappa|``). Both clause values are reported.
    """
    margin = 1.0 + d * kappa
    ahead = margin > 0.0
    if not ahead:
        return FeasibilityResult(False, margin, False, math.nan, math.nan, False)
    L1 = float(los_length(lookahead(profile, d), d, kappa))
    reach = math.inf if kappa == 0.0 else 2.0 / abs(kappa) - d
    within = L1 <= reach
    return FeasibilityResult(ahead and within, margin, ahead, L1, reach, within)


def curvature_sensitivity(d, kappa, profile: LookaheadProfile):
    """Dimensionless elasticity of the commanded acceleration w.r.t. curvature.

    ``sigma = -kappa * L0(d)^2 * d / (2 * (d^2 + L0(d)^2 * (1 + d*kappa)))``;
    near the path it behaves like ``-kappa*d/2`` and stays below 1/2 in
    magnitude for large look-ahead distances.
    """
    margin = 1.0 + np.multiply(d, kappa)
    if np.any(margin <= 0.0):
        raise InfeasibleGeometry("curvature sensitivity requires 1 + d*kappa > 0")
    L0_sq = np.square(lookahead(profile, d))
    return -kappa * L0_sq * d / (2.0 * (np.square(d) + L0_sq * margin))


def accel_curvature_gradient(d, kappa, eta, profile: LookaheadProfile,
                             limits: GuidanceLimits):
    """Analytic derivative of the unsaturated command w.r.t. curvature at fixed eta.

    ``-V_u^2 sin(eta) L0(d)^2 d / (d^2 + L0(d)^2 (1 + d*kappa))^{3/2}``;
    negative for d > 0 on left-turning paths, so added curvature lowers the
    commanded acceleration.
    """
    margin = 1.0 + np.multiply(d, kappa)
    if np.any(margin <= 0.0):
        raise InfeasibleGeometry("gradient requires 1 + d*kappa > 0")
    L0_sq = np.square(lookahead(profile, d))
    L1_sq = np.square(d) + L0_sq * margin
    return -limits.V_u**2 * np.sin(eta) * L0_sq * d / L1_sq**1.5
