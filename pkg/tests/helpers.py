"""Independent oracles and synthetic records used across the test suite."""

import math
from types import SimpleNamespace

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def ellipse_closest_oracle(a, b, point, n_samples=4096, iters=120):
    """Closest point on an axis-aligned, origin-centered ellipse.

    Dense sampling of the parametric angle followed by golden-section
    refinement of the squared distance on the bracketing interval. Entirely
    independent of the Newton-based projection under test. The refinement
    runs in extended precision: locating a smooth minimum from values alone
    is only sqrt(eps)-accurate, which in double precision would leave more
    angle error than the comparison tolerance allows.
    """
    ld = np.longdouble
    a_l, b_l = ld(a), ld(b)
    px, py = ld(float(point[0])), ld(float(point[1]))
    golden = (np.sqrt(ld(5)) - 1) / 2

    def dist_sq(t):
        return (a_l * np.cos(t) - px) ** 2 + (b_l * np.sin(t) - py) ** 2

    ts = np.linspace(0.0, 2.0 * math.pi, n_samples, endpoint=False).astype(ld)
    best = int(np.argmin(dist_sq(ts)))
    span = ld(2.0 * math.pi / n_samples)
    lo, hi = ts[best] - span, ts[best] + span
    x1 = hi - golden * (hi - lo)
    x2 = lo + golden * (hi - lo)
    f1, f2 = dist_sq(x1), dist_sq(x2)
    for _ in range(iters):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - golden * (hi - lo)
            f1 = dist_sq(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + golden * (hi - lo)
            f2 = dist_sq(x2)
    t = float((lo + hi) / 2)
    return np.array([a * math.cos(t), b * math.sin(t)])


def constant_turn_arc(x0, y0, psi0, v, a_d, t):
    """Closed-form state of the kinematics under a constant nonzero command."""
    omega = a_d / v
    psi = psi0 + omega * t
    x = x0 + (v / omega) * (math.sin(psi) - math.sin(psi0))
    y = y0 - (v / omega) * (math.cos(psi) - math.cos(psi0))
    return x, y, psi


def synthetic_traj(t, d, a_d=None, region=None, eta=None, eta_bar=None,
                   settle_eps=None, limits=None):
    """Duck-typed stand-in for a TrajectoryRecord in metric unit tests."""
    t = np.asarray(t, dtype=float)
    d = np.asarray(d, dtype=float)
    n = len(t)
    return SimpleNamespace(
        t=t,
        d=d,
        a_d=np.zeros(n) if a_d is None else np.asarray(a_d, dtype=float),
        region=np.array(["S1"] * n) if region is None else np.asarray(region),
        eta=np.zeros(n) if eta is None else np.asarray(eta, dtype=float),
        eta_bar=np.full(n, math.pi / 2) if eta_bar is None
        else np.asarray(eta_bar, dtype=float),
        settle_eps=settle_eps,
        limits=limits,
    )
