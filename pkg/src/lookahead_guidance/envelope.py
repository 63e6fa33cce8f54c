"""Saturation-envelope analysis over the cross-track / heading-error plane.

For a fixed curvature, the boundary heading error is a function of the
cross-track error alone, so region maps, unsaturated-area fractions, and the
gain of the variable look-ahead profile over a constant baseline reduce to
vectorised sweeps over a rectangular grid of (d, eta) nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundUndefined, DegenerateBaseline, InfeasibleGeometry
from .guidance import (
    S1,
    S2,
    S3,
    ConstantLookahead,
    GuidanceLimits,
    LookaheadProfile,
    VariableLookahead,
    lookahead,
    lookahead_far_limit,
    los_length,
    saturation_boundary,
)


@dataclass(frozen=True)
class GridSpec:
    """Uniform evaluation grid, endpoints included, with one curvature for all nodes."""

    d_min: float = 0.0
    d_max: float = 200.0
    eta_min: float = -math.pi
    eta_max: float = math.pi
    n_d: int = 1000
    n_eta: int = 1000
    kappa: float = 0.0

    def __post_init__(self):
        if not self.d_min < self.d_max:
            raise ValueError("d_min must be < d_max")
        if not self.eta_min < self.eta_max:
            raise ValueError("eta_min must be < eta_max")
        if self.n_d < 2 or self.n_eta < 2:
            raise ValueError("grid needs at least 2 nodes per axis")
        for d in (self.d_min, self.d_max):
            if 1.0 + d * self.kappa <= 0.0:
                raise ValueError("grid violates 1 + d*kappa > 0")

    def d_nodes(self) -> np.ndarray:
        return np.linspace(self.d_min, self.d_max, self.n_d)

    def eta_nodes(self) -> np.ndarray:
        return np.linspace(self.eta_min, self.eta_max, self.n_eta)


def boundary_curve(profile: LookaheadProfile, grid: GridSpec,
                   limits: GuidanceLimits) -> np.ndarray:
    """Boundary heading error per d-node of the grid."""
    d = grid.d_nodes()
    L1 = los_length(lookahead(profile, d), d, grid.kappa)
    return saturation_boundary(L1, limits)


def unsaturated_fraction(profile: LookaheadProfile, grid: GridSpec,
                         limits: GuidanceLimits) -> float:
    """Fraction of grid nodes strictly inside the unsaturated region.

    Counts nodes with ``|eta| < eta_bar(d)`` (strict inequality, so the
    boundary itself is excluded; the closed-region classifier in
    ``guidance.classify_region`` differs only on that measure-zero set).
    """
    if np.any(1.0 + grid.d_nodes() * grid.kappa <= 0.0):
        raise InfeasibleGeometry("grid violates 1 + d*kappa > 0")
    eta_bar = boundary_curve(profile, grid, limits)
    abs_eta = np.abs(grid.eta_nodes())
    hits = np.count_nonzero(abs_eta[None, :] < eta_bar[:, None])
    return hits / (grid.n_d * grid.n_eta)


def region_grid(profile: LookaheadProfile, grid: GridSpec,
                limits: GuidanceLimits) -> np.ndarray:
    """Region tag per node, shape (n_d, n_eta); S1 is closed (|eta| <= eta_bar)."""
    eta_bar = boundary_curve(profile, grid, limits)[:, None]
    eta = grid.eta_nodes()[None, :]
    return np.where(
        np.abs(eta) <= eta_bar, S1, np.where(eta > eta_bar, S2, S3)
    )


@dataclass
class EnvelopeReport:
    """Grid analysis of both laws: area fractions, gains, boundaries, region maps."""

    A_const: float
    A_var: float
    G_abs: float
    G_rel: float
    grid: GridSpec
    boundary_const: np.ndarray
    boundary_var: np.ndarray
    region_const: np.ndarray = field(repr=False)
    region_var: np.ndarray = field(repr=False)


def envelope_gain(grid: GridSpec, limits: GuidanceLimits,
                  const_profile: LookaheadProfile,
                  var_profile: LookaheadProfile) -> tuple[float, float]:
    """Absolute gain (percentage points) and relative gain (percent) of the
    variable profile's unsaturated fraction over the constant baseline."""
    a_const = unsaturated_fraction(const_profile, grid, limits)
    a_var = unsaturated_fraction(var_profile, grid, limits)
    if a_const == 0.0:
        raise DegenerateBaseline("baseline unsaturated fraction is zero")
    return (a_var - a_const) * 100.0, (a_var / a_const - 1.0) * 100.0


def compute_envelope(grid: GridSpec, limits: GuidanceLimits,
                     const_profile: LookaheadProfile,
                     var_profile: LookaheadProfile) -> EnvelopeReport:
    """Full comparison report for two profiles over one grid."""
    a_const = unsaturated_fraction(const_profile, grid, limits)
    a_var = unsaturated_fraction(var_profile, grid, limits)
    if a_const == 0.0:
        raise DegenerateBaseline("baseline unsaturated fraction is zero")
    return EnvelopeReport(
        A_const=a_const,
        A_var=a_var,
        G_abs=(a_var - a_const) * 100.0,
        G_rel=(a_var / a_const - 1.0) * 100.0,
        grid=grid,
        boundary_const=boundary_curve(const_profile, grid, limits),
        boundary_var=boundary_curve(var_profile, grid, limits),
        region_const=region_grid(const_profile, grid, limits),
        region_var=region_grid(var_profile, grid, limits),
    )


def ratio_sweep(ratios, grid: GridSpec, limits: GuidanceLimits,
                L_min: float, d_c: float) -> list[tuple[float, float, float]]:
    """Envelope gains for a family of variable profiles with ``L_max = ratio * L_min``.

    Returns one ``(ratio, G_abs, G_rel)`` triple per requested ratio; ratio 1
    degenerates to the constant baseline and yields zero gains.
    """
    ratios = [float(r) for r in ratios]
    if any(r < 1.0 for r in ratios):
        raise ValueError("ratios must be >= 1")
    const_profile = ConstantLookahead(L_min)
    a_const = unsaturated_fraction(const_profile, grid, limits)
    if a_const == 0.0:
        raise DegenerateBaseline("baseline unsaturated fraction is zero")
    out = []
    for ratio in ratios:
        var_profile = VariableLookahead(L_min, ratio * L_min, d_c)
        a_var = unsaturated_fraction(var_profile, grid, limits)
        out.append((ratio, (a_var - a_const) * 100.0, (a_var / a_const - 1.0) * 100.0))
    return out


@dataclass(frozen=True)
class BoundaryGap:
    """LOS-length and boundary-angle gaps between two profiles at one state."""

    delta_L1: float
    delta_eta_bar_bound: float
    delta_eta_bar_exact: float


def boundary_gap(d: float, kappa: float, const_profile: LookaheadProfile,
                 var_profile: LookaheadProfile,
                 limits: GuidanceLimits) -> BoundaryGap:
    """Quantify how much the variable profile widens the saturation boundary.

    ``delta_L1`` is computed through the factorisation
    ``(L0_v(d)^2 - L0_c(d)^2) * (1 + d*kappa) / (L1_v + L1_c)``, which is
    algebraically the LOS-length difference but numerically stable for small
    gaps. ``delta_eta_bar_exact`` is the direct boundary difference, and
    ``delta_eta_bar_bound`` the mean-value estimate
    ``delta_L1 / (2 R_min sqrt(1 - (L1_v / 2 R_min)^2))`` evaluated at the
    larger LOS length. Because the arcsine derivative grows with its
    argument, the estimate can land on either side of the exact gap; only
    ``delta_eta_bar_exact >= 0`` is guaranteed.
    """
    L0_c = float(lookahead(const_profile, d))
    L0_v = float(lookahead(var_profile, d))
    L1_c = float(los_length(L0_c, d, kappa))
    L1_v = float(los_length(L0_v, d, kappa))
    if L1_v >= 2.0 * limits.R_min:
        raise BoundUndefined("bound needs L1_v < 2*R_min")
    delta_L1 = (L0_v**2 - L0_c**2) * (1.0 + d * kappa) / (L1_v + L1_c)
    exact = float(
        saturation_boundary(L1_v, limits) - saturation_boundary(L1_c, limits)
    )
    ratio = L1_v / (2.0 * limits.R_min)
    bound = delta_L1 / (2.0 * limits.R_min * math.sqrt(1.0 - ratio**2))
    return BoundaryGap(delta_L1, bound, exact)


def far_field_boundary_gap(limits: GuidanceLimits,
                           const_profile: LookaheadProfile,
                           var_profile: LookaheadProfile) -> float:
    """Boundary-angle gap in the regime where the look-ahead saturates.

    Evaluates ``arcsin(L_v/(2R_min)) - arcsin(L_c/(2R_min))`` at the two
    profiles' far-field look-ahead limits (LOS length taken as the look-ahead
    itself, valid while the cross-track error is small against it).
    """
    L_c = lookahead_far_limit(const_profile)
    L_v = lookahead_far_limit(var_profile)
    if L_c >= 2.0 * limits.R_min or L_v >= 2.0 * limits.R_min:
        raise BoundUndefined("far-field gap needs both look-ahead limits < 2*R_min")
    return math.asin(L_v / (2.0 * limits.R_min)) - math.asin(L_c / (2.0 * limits.R_min))


def far_field_time_gain(limits: GuidanceLimits,
                        const_profile: LookaheadProfile,
                        var_profile: LookaheadProfile) -> float:
    """Saturated-time reduction ``(R_min / V_u) * delta_eta_bar`` in the far field.

    A saturated vehicle sweeps heading error at least at ``V_u / (2 R_min)``,
    so widening the boundary shortens the saturated phase proportionally.
    """
    return (limits.R_min / limits.V_u) * far_field_boundary_gap(
        limits, const_profile, var_profile
    )


@dataclass
class PolarMap:
    """Region tags at grid states mapped to the plane via (d cos eta, d sin eta)."""

    x: np.ndarray
    y: np.ndarray
    region: np.ndarray


def polar_map_export(grid: GridSpec, limits: GuidanceLimits,
                     profile: LookaheadProfile) -> PolarMap:
    """Flatten the region map into plot-ready Cartesian points, one per node."""
    if grid.d_min < 0.0:
        raise ValueError("polar export requires d >= 0 on the grid")
    d = grid.d_nodes()[:, None]
    eta = grid.eta_nodes()[None, :]
    regions = region_grid(profile, grid, limits)
    x = np.broadcast_to(d * np.cos(eta), regions.shape)
    y = np.broadcast_to(d * np.sin(eta), regions.shape)
    return PolarMap(x=x.ravel().copy(), y=y.ravel().copy(), region=regions.ravel())


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def write_envelope_grid_csv(report: EnvelopeReport, stream) -> None:
    """Write one row per node: d,eta,eta_bar_c,eta_bar_v,region_c,region_v."""
    stream.write("d,eta,eta_bar_c,eta_bar_v,region_c,region_v\n")
    d_nodes = report.grid.d_nodes()
    eta_nodes = report.grid.eta_nodes()
    for i, d in enumerate(d_nodes):
        eb_c = _fmt(report.boundary_const[i])
        eb_v = _fmt(report.boundary_var[i])
        d_s = _fmt(d)
        row_c = report.region_const[i]
        row_v = report.region_var[i]
        for j, eta in enumerate(eta_nodes):
            stream.write(
                f"{d_s},{_fmt(eta)},{eb_c},{eb_v},{row_c[j]},{row_v[j]}\n"
            )


def write_boundary_csv(report: EnvelopeReport, stream) -> None:
    stream.write("d,eta_bar_c,eta_bar_v\n")
    for d, c, v in zip(report.grid.d_nodes(), report.boundary_const,
                       report.boundary_var):
        stream.write(f"{_fmt(d)},{_fmt(c)},{_fmt(v)}\n")


def write_summary_csv(report: EnvelopeReport, stream) -> None:
    stream.write("A_const,A_var,G_abs,G_rel\n")
    stream.write(
        f"{_fmt(report.A_const)},{_fmt(report.A_var)},"
        f"{_fmt(report.G_abs)},{_fmt(report.G_rel)}\n"
    )


def write_polar_csv(polar: PolarMap, stream) -> None:
    stream.write("x,y,region\n")
    for x, y, region in zip(polar.x, polar.y, polar.region):
        stream.write(f"{_fmt(x)},{_fmt(y)},{region}\n")


def write_ratio_sweep_csv(series, stream) -> None:
    stream.write("ratio,G_abs,G_rel\n")
    for ratio, g_abs, g_rel in series:
        stream.write(f"{_fmt(ratio)},{_fmt(g_abs)},{_fmt(g_rel)}\n")
