"""Lebesgue, weak, Morrey, Orlicz (L log L), and BMO norms on grid functions.

Strong norms are midpoint sums, (h^n sum |f|^p)^{1/p}. Weak norms are exact
for grid functions: sup_t t m({|f| > t})^{1/p} is attained just below a
sample value, so sorting |f| descending and maximizing
v_(k) ((k+1) h^n)^{1/p} over positions k gives the supremum with no search.

Morrey-scale norms take a supremum over an explicit ball family and weight
each ball by its continuum measure, m(B)^{-kappa/p}. The L log L member of
the scale uses the Luxemburg gauge of phi_p(t) = t^p (1 + p log+ t), i.e.
t^p (1 + log+(t^p)), computed by bisection; phi_p is convex, increasing,
and doubling for p >= 1, and with this normalization the gauge of an
indicator over its own support has the closed form used by the calibration
tests.

BMO is mean oscillation with cell-count averages over family balls, so it
vanishes on constants (up to float rounding) regardless of how balls are
clipped.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import Ball, BallFamily, GridFunction, ball_cell_runs

__all__ = [
    "lp_norm",
    "weak_lp_norm",
    "morrey_norm",
    "weak_morrey_norm",
    "luxemburg_norm",
    "llogl_morrey_norm",
    "bmo_norm",
]


def _ball_abs_values(f: GridFunction, ball: Ball | None) -> np.ndarray:
    if ball is None:
        return np.abs(f.values)
    runs = ball_cell_runs(f.domain, ball.center, ball.radius)
    if not runs:
        return np.empty(0)
    return np.abs(np.concatenate([f.values[lo:hi] for lo, hi in runs]))


def lp_norm(f: GridFunction, p: float, ball: Ball | None = None) -> float:
    """(h^n sum |f|^p)^{1/p}, optionally restricted to a ball; p = inf is sup.

    p in (0, 1) is accepted as the usual quasi-norm.
    """
    v = _ball_abs_values(f, ball)
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(v))
    if not p > 0.0:
        raise ValueError(f"p={p} must be positive")
    hn = f.domain.spacing ** f.domain.n
    return float((hn * np.sum(v ** p)) ** (1.0 / p))


def weak_lp_norm(f: GridFunction, p: float, ball: Ball | None = None) -> float:
    """sup_t t m({|f| > t})^{1/p}, exact for grid functions."""
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"p={p} must be positive and finite")
    v = _ball_abs_values(f, ball)
    v = v[v > 0.0]
    if v.size == 0:
        return 0.0
    v = np.sort(v)[::-1]
    hn = f.domain.spacing ** f.domain.n
    k = np.arange(1, v.size + 1)
    return float(np.max(v * (k * hn) ** (1.0 / p)))


def _run_power_sums(f: GridFunction, p: float, family: BallFamily) -> list:
    # shared prefix over |f|^p makes each ball an O(#runs) lookup
    pf = np.concatenate([[0.0], np.cumsum(np.abs(f.values) ** p)])
    sums = []
    for ball in family.balls:
        runs = ball_cell_runs(f.domain, ball.center, ball.radius)
        sums.append(sum(pf[hi] - pf[lo] for lo, hi in runs))
    return sums


def morrey_norm(f: GridFunction, p: float, kappa: float, family: BallFamily) -> float:
    """sup over family balls of m(B)^{-kappa/p} (integral of |f|^p over B)^{1/p}."""
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"p={p} must be positive and finite")
    if not 0.0 <= kappa < 1.0:
        raise ValueError(f"kappa={kappa} must lie in [0, 1)")
    if family.domain != f.domain:
        raise ValueError("ball family and function must share one domain")
    hn = f.domain.spacing ** f.domain.n
    best = 0.0
    for ball, s in zip(family.balls, _run_power_sums(f, p, family)):
        val = ball.measure ** (-kappa / p) * (hn * s) ** (1.0 / p)
        best = max(best, val)
    return best


def weak_morrey_norm(f: GridFunction, p: float, kappa: float, family: BallFamily) -> float:
    """sup over family balls of m(B)^{-kappa/p} times the weak L^p norm on B."""
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"p={p} must be positive and finite")
    if not 0.0 <= kappa < 1.0:
        raise ValueError(f"kappa={kappa} must lie in [0, 1)")
    if family.domain != f.domain:
        raise ValueError("ball family and function must share one domain")
    best = 0.0
    for ball in family.balls:
        val = ball.measure ** (-kappa / p) * weak_lp_norm(f, p, ball)
        best = max(best, val)
    return best


def _phi_sum(v: np.ndarray, lam: float, p: float, hn: float) -> float:
    t = v / lam
    tp = t ** p
    logs = np.log(np.maximum(t, 1.0))
    return float(hn * np.sum(tp * (1.0 + p * logs)))


def luxemburg_norm(f: GridFunction, p: float, ball: Ball | None = None) -> float:
    """Luxemburg gauge inf{lam > 0 : integral phi_p(|f|/lam) <= 1} on a ball.

    phi_p(t) = t^p (1 + p log+ t). Bisection down to a relative bracket of
    1e-13; the returned value is the upper bracket end, so the gauge
    inequality integral phi_p(|f|/norm) <= 1 holds for the returned norm.
    """
    if not (p >= 1.0 and math.isfinite(p)):
        raise ValueError(f"p={p} must be finite and >= 1 for the Orlicz gauge")
    v = _ball_abs_values(f, ball)
    v = v[v > 0.0]
    if v.size == 0:
        return 0.0
    hn = f.domain.spacing ** f.domain.n
    vmax = float(np.max(v))
    # phi_p(t) <= t^p for t <= 1, so this upper bound forces the sum <= 1
    hi = vmax * max(1.0, (v.size * hn) ** (1.0 / p)) * (1.0 + 1e-9)
    lo = vmax * 1e-16
    if _phi_sum(v, lo, p, hn) <= 1.0:
        return lo
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if _phi_sum(v, mid, p, hn) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def llogl_morrey_norm(f: GridFunction, p: float, kappa: float, family: BallFamily) -> float:
    """sup over family balls of m(B)^{-kappa/p} times the Luxemburg gauge on B."""
    if not 0.0 <= kappa < 1.0:
        raise ValueError(f"kappa={kappa} must lie in [0, 1)")
    if family.domain != f.domain:
        raise ValueError("ball family and function must share one domain")
    best = 0.0
    for ball in family.balls:
        val = ball.measure ** (-kappa / p) * luxemburg_norm(f, p, ball)
        best = max(best, val)
    return best


def bmo_norm(f: GridFunction, family: BallFamily) -> float:
    """sup over family balls of the mean absolute deviation from the ball mean.

    Cell-count averages on both levels; zero on constants up to rounding.
    """
    if family.domain != f.domain:
        raise ValueError("ball family and function must share one domain")
    best = 0.0
    for ball in family.balls:
        runs = ball_cell_runs(f.domain, ball.center, ball.radius)
        count = sum(hi - lo for lo, hi in runs)
        if count == 0:
            continue
        vals = np.concatenate([f.values[lo:hi] for lo, hi in runs])
        mean = float(np.mean(vals))
        best = max(best, float(np.mean(np.abs(vals - mean))))
    return best
