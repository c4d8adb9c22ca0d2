"""Pointwise splitting bounds for the multilinear fractional integral.

The classical route to strong bounds splits T at a radius sigma:

    near part   <= c sigma^alpha M_{s'}(f vec)(x),
    far part    <= c sigma^{alpha - n/p} prod_i ||f_i||_{p_i},

and on the Morrey scale the far part upgrades to
sigma^{alpha - (1 - kappa) n/p} prod_i ||f_i||_{p_i, kappa}. This module
computes the two pieces, the minimizing sigma (where the pieces are equal,
since one is increasing and the other decreasing in sigma), and a geometric
sigma ladder for sweeps. Constants are deliberately omitted: the pieces are
the bare quantities, so equality at the optimum is an algebraic identity
the tests can pin to a 1e-12 relative tolerance.

With kappa = 0 the Morrey piece degenerates to the Lebesgue piece whenever
the ball family covers the support of every f_i, so the two splits agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exponents import ExponentSet
from .grid import BallFamily, Domain
from .norms import lp_norm, morrey_norm
from .operators import power_maximal_at

__all__ = [
    "SplitBound",
    "hedberg_split",
    "hedberg_optimal_sigma",
    "adams_split",
    "adams_optimal_sigma",
    "sigma_ladder",
]


@dataclass(frozen=True)
class SplitBound:
    """Both pieces of a splitting bound at one point and radius."""

    x: tuple
    sigma: float
    piece_I: float
    piece_II: float

    @property
    def total(self) -> float:
        return self.piece_I + self.piece_II


def _check_inputs(exps: ExponentSet, fs, x) -> tuple:
    fs = list(fs)
    if len(fs) != exps.m:
        raise ValueError(f"got {len(fs)} inputs for m={exps.m}")
    domain = fs[0].domain
    for f in fs:
        if f.domain != domain:
            raise ValueError("all inputs must share one domain")
    if domain.n != exps.n:
        raise ValueError(f"domain dimension {domain.n} != exponent dimension {exps.n}")
    if not math.isfinite(exps.s_prime):
        raise ValueError("the splitting needs s > 1 so that s' is finite")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.shape != (domain.n,):
        raise ValueError(f"evaluation point must have shape ({domain.n},)")
    return fs, domain, x


def _maximal_piece(exps, fs, x, sigma, ladder) -> float:
    return sigma ** exps.alpha * power_maximal_at(fs, exps.s_prime, x, ladder)


def hedberg_split(exps: ExponentSet, fs, x, sigma: float, ladder=None) -> SplitBound:
    """Lebesgue-scale split: sigma^alpha M_{s'} and sigma^{alpha - n/p} prod ||f_i||."""
    fs, domain, x = _check_inputs(exps, fs, x)
    if not sigma > 0.0:
        raise ValueError(f"sigma={sigma} must be positive")
    piece_I = _maximal_piece(exps, fs, x, sigma, ladder)
    prod = 1.0
    for f, p in zip(fs, exps.p_list):
        prod *= lp_norm(f, p)
    piece_II = sigma ** (exps.alpha - exps.n / exps.p) * prod
    return SplitBound(x=tuple(x), sigma=float(sigma), piece_I=piece_I, piece_II=piece_II)


def hedberg_optimal_sigma(exps: ExponentSet, fs, x, ladder=None) -> float:
    """The sigma equating the two Lebesgue-scale pieces, (prod/M)^{p/n}."""
    fs, domain, x = _check_inputs(exps, fs, x)
    M = power_maximal_at(fs, exps.s_prime, x, ladder)
    if M == 0.0:
        raise ValueError("maximal function vanishes at x; no finite balancing sigma")
    prod = 1.0
    for f, p in zip(fs, exps.p_list):
        prod *= lp_norm(f, p)
    return (prod / M) ** (exps.p / exps.n)


def adams_split(exps: ExponentSet, fs, x, sigma: float, family: BallFamily, ladder=None) -> SplitBound:
    """Morrey-scale split: the far piece decays as sigma^{alpha - (1-kappa) n/p}."""
    fs, domain, x = _check_inputs(exps, fs, x)
    if not sigma > 0.0:
        raise ValueError(f"sigma={sigma} must be positive")
    piece_I = _maximal_piece(exps, fs, x, sigma, ladder)
    prod = 1.0
    for f, p in zip(fs, exps.p_list):
        prod *= morrey_norm(f, p, exps.kappa, family)
    expo = exps.alpha - (1.0 - exps.kappa) * exps.n / exps.p
    piece_II = sigma ** expo * prod
    return SplitBound(x=tuple(x), sigma=float(sigma), piece_I=piece_I, piece_II=piece_II)


def adams_optimal_sigma(exps: ExponentSet, fs, x, family: BallFamily, ladder=None) -> float:
    """The sigma equating the two Morrey-scale pieces."""
    fs, domain, x = _check_inputs(exps, fs, x)
    M = power_maximal_at(fs, exps.s_prime, x, ladder)
    if M == 0.0:
        raise ValueError("maximal function vanishes at x; no finite balancing sigma")
    prod = 1.0
    for f, p in zip(fs, exps.p_list):
        prod *= morrey_norm(f, p, exps.kappa, family)
    return (prod / M) ** (exps.p / ((1.0 - exps.kappa) * exps.n))


def sigma_ladder(domain: Domain, count: int = 64) -> tuple:
    """Geometric radii from h up to 4L, `count` points."""
    if count < 2:
        raise ValueError(f"count={count} must be at least 2")
    h, L = domain.spacing, domain.half_width
    ratio = 4.0 * L / h
    return tuple(h * ratio ** (j / (count - 1.0)) for j in range(count))
