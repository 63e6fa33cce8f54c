"""Scalar performance indices computed from a recorded trajectory.

Settling time is the first entry of ``|d|`` into the band ``[-eps, eps]``
(interpolated between samples), control effort the time integral of the
squared commanded acceleration, and peak overshoot the largest excursion
beyond the far band edge after the first entry. All functions are pure and
operate on the arrays of a :class:`..simulation.TrajectoryRecord`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .guidance import S1, GuidanceLimits


def settling_time(traj, eps: float) -> float | None:
    """First time with ``|d| <= eps``, linearly interpolated; None if never."""
    if not eps > 0.0:
        raise ValueError("eps must be strictly positive")
    abs_d = np.abs(traj.d)
    hits = np.nonzero(abs_d <= eps)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return 0.0
    frac = (abs_d[i - 1] - eps) / (abs_d[i - 1] - abs_d[i])
    return float(traj.t[i - 1] + frac * (traj.t[i] - traj.t[i - 1]))


def control_effort(traj) -> float:
    """Trapezoidal integral of the squared commanded acceleration."""
    return float(np.trapezoid(np.square(traj.a_d), traj.t))


def peak_overshoot(traj, eps: float) -> float:
    """Largest excursion beyond the far band edge after first band entry.

    For a trajectory approaching from positive ``d``, this is
    ``max((-d(t) - eps)^+)`` over ``t`` at or after the band-entry time; runs
    that start on the negative side are sign-flipped first so overshoot
    always means crossing past the band edge opposite the approach. Returns
    0 when the band is never entered or never overshot.
    """
    if not eps > 0.0:
        raise ValueError("eps must be strictly positive")
    t_entry = settling_time(traj, eps)
    if t_entry is None:
        return 0.0
    sign = 1.0 if traj.d[0] >= 0.0 else -1.0
    d = sign * traj.d[traj.t >= t_entry]
    if d.size == 0:
        return 0.0
    return float(max(0.0, np.max(-d - eps)))


def saturation_exit(traj, limits: GuidanceLimits) -> tuple[float, float]:
    """Duration of the initial saturated phase and its analytic upper bound.

    The bound is ``(R_min / V_u) * (|eta(0)| - eta_bar(d(0)))^+``: a
    saturated vehicle sweeps heading error at a floored rate, so the angular
    distance to the boundary limits how long the initial S2/S3 phase lasts.
    """
    k = 0
    n = len(traj.region)
    while k < n and traj.region[k] != S1:
        k += 1
    measured = float(traj.t[k]) if k < n else math.inf
    bound = (limits.R_min / limits.V_u) * max(
        0.0, abs(float(traj.eta[0])) - float(traj.eta_bar[0])
    )
    return measured, bound


@dataclass(frozen=True)
class PerformanceReport:
    """Scalar summary of one run; ``t_s`` is None when the band is never entered."""

    t_s: float | None
    J: float
    Mp: float
    T_far_measured: float
    T_far_bound: float


def performance_report(traj, eps: float | None = None,
                       limits: GuidanceLimits | None = None) -> PerformanceReport:
    """Evaluate all indices, defaulting to the run's own band and limits."""
    eps = traj.settle_eps if eps is None else eps
    limits = traj.limits if limits is None else limits
    t_far, t_far_bound = saturation_exit(traj, limits)
    return PerformanceReport(
        t_s=settling_time(traj, eps),
        J=control_effort(traj),
        Mp=peak_overshoot(traj, eps),
        T_far_measured=t_far,
        T_far_bound=t_far_bound,
    )


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def report_to_csv(report: PerformanceReport, stream) -> None:
    """One header and one data row; an absent settling time is an empty field."""
    stream.write("t_s,J,Mp,T_far_measured,T_far_bound\n")
    stream.write(
        f"{_fmt(report.t_s)},{_fmt(report.J)},{_fmt(report.Mp)},"
        f"{_fmt(report.T_far_measured)},{_fmt(report.T_far_bound)}\n"
    )


def report_to_text(report: PerformanceReport) -> str:
    """Flat key=value block, one metric per line."""
    lines = [
        f"t_s={_fmt(report.t_s)}",
        f"J={_fmt(report.J)}",
        f"Mp={_fmt(report.Mp)}",
        f"T_far_measured={_fmt(report.T_far_measured)}",
        f"T_far_bound={_fmt(report.T_far_bound)}",
    ]
    return "\n".join(lines) + "\n"
