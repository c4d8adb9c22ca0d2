"""Discrete multilinear fractional integral and maximal operators.

Integral operators are midpoint sums over the input grid,

    T(f_1..f_m)(x) ~ h^{mn} sum_{y vec} prod_i Omega_i(x - y_i)
                      |(x - y_1, .., x - y_m)|^{alpha - mn} prod_i f_i(y_i),

with the singular node y_i = x (all i) excluded and replaced by the local
cell integral: (prod_i spherical mean of Omega_i) times
integral over cell(x)^m of |z|^{alpha - mn} dz, evaluated once per (mn,
alpha) by a 4-points-per-axis refined midpoint rule on the unit cell and
scaled by h^alpha. A kernel fed the zero vector at an off-diagonal node
(possible for m >= 2) evaluates to its spherical mean, which in 1D is the
exact cell mean.

Point evaluation at arbitrary x (not necessarily a cell center) generalizes
the replacement: per axis, the singular region collects the cells whose
closure contains the coordinate of x (one or two cells), the local integral
is a refined midpoint rule with h/4 subcells over the region, and the
weight is the product of kernel spherical means times per-slot means of f
over the region's cells. For x a cell center this reduces to the diagonal
rule above.

Maximal operators take suprema over a dyadic radius ladder. The centered
fractional maximal M_{Omega,alpha;m} and its non-centered variant use the
continuum ball measure m(B) = v_n r^n; the Lerner-style maximal (products
of plain averages over one ball) and its power variant M_{s'} use
cell-count averages, which map constants to constants exactly.

Determinism: every output value is produced by a fixed loop nest; sums over
nodes use numpy reductions / BLAS contractions whose operand layout is a
pure function of (domain, spec), so results do not depend on any scheduling
outside the linear algebra library. No FFT is used anywhere.

Cost is O(G^{n(m+1)}) for the integral operators: fine for m <= 2 at n = 1
(G up to 4096) and for m = 1 at n = 2; the m = 2, n = 2 full-grid path is
capped at G = 48 and m = 3 is supported for n = 1 only.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import (
    Domain,
    GridFunction,
    axis_centers,
    ball_cell_runs,
    cell_centers,
    default_radius_ladder,
    unit_ball_volume,
)
from .kernel import Kernel, constant_kernel, eval_kernel, spherical_mean, node_finite

__all__ = [
    "OperatorSpec",
    "EvalReport",
    "eval_fractional_integral",
    "fractional_integral_at",
    "eval_fractional_maximal",
    "fractional_maximal_at",
    "eval_noncentered_maximal",
    "eval_lerner_maximal",
    "lerner_maximal_at",
    "eval_power_maximal",
    "power_maximal_at",
    "eval_bilinear_grafakos",
    "unit_cell_integral",
]

_KINDS = (
    "fractional_integral",
    "fractional_maximal_centered",
    "fractional_maximal_noncentered",
    "lerner_maximal",
    "bilinear_grafakos",
)


@dataclass(frozen=True)
class OperatorSpec:
    """Operator kind plus its parameters.

    alpha = 0 is legal only for the maximal kinds. kernels defaults to the
    constant-1 vector. ladder overrides the domain's dyadic radius ladder
    for maximal kinds.
    """

    kind: str
    m: int
    alpha: float
    kernels: tuple = ()
    ladder: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}; expected one of {_KINDS}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m={self.m} must be a positive integer")
        maximal = self.kind in (
            "fractional_maximal_centered",
            "fractional_maximal_noncentered",
            "lerner_maximal",
        )
        if self.alpha < 0.0 or (self.alpha == 0.0 and not maximal):
            raise ValueError(
                f"alpha={self.alpha} must be positive (zero is allowed only for maximal kinds)"
            )


@dataclass(frozen=True)
class EvalReport:
    """Full-grid evaluation result with quadrature bookkeeping."""

    output: GridFunction
    skipped_singular_nodes: int
    wall_time: float
    h: float


@lru_cache(maxsize=64)
def unit_cell_integral(dim: int, alpha: float) -> float:
    """integral over [-1/2, 1/2]^dim of |u|^{alpha - dim} du.

    Refined midpoint rule with 4 subcells per axis (4^dim points), the rule
    pinned for the diagonal-cell replacement. alpha > 0 keeps the integrand
    integrable; the rule's nodes avoid the origin.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha={alpha} must be positive for the cell integral")
    pts1 = np.array([-0.375, -0.125, 0.125, 0.375])
    grids = np.meshgrid(*([pts1] * dim), indexing="ij")
    r2 = np.zeros(grids[0].shape)
    for g in grids:
        r2 += g * g
    vals = r2 ** ((alpha - dim) / 2.0)
    return float(np.sum(vals) * 0.25 ** dim)


def _check_common(spec: OperatorSpec, fs) -> Domain:
    fs = list(fs)
    if len(fs) != spec.m:
        raise ValueError(f"got {len(fs)} inputs for an m={spec.m} operator")
    domain = fs[0].domain
    for f in fs:
        if f.domain != domain:
            raise ValueError("all inputs must share one domain")
    kernels = _kernels_of(spec, domain.n)
    for k in kernels:
        if k.n != domain.n:
            raise ValueError(f"kernel dimension {k.n} does not match domain dimension {domain.n}")
        if not node_finite(k):
            raise ValueError(
                "kernel is unbounded along lattice directions; midpoint nodes would "
                "be non-finite (2D angular powers with beta > 0 are not node-finite)"
            )
    return domain


def _kernels_of(spec: OperatorSpec, n: int) -> tuple:
    if spec.kernels:
        return tuple(spec.kernels)
    return tuple(constant_kernel(n) for _ in range(spec.m))


def _offset_kernel_values_1d(kernel: Kernel, G: int) -> np.ndarray:
    """Kernel at offsets d = -(G-1)..(G-1); spherical mean at d = 0."""
    vp = eval_kernel(kernel, np.array([1.0]))
    vm = eval_kernel(kernel, np.array([-1.0]))
    kv = np.empty(2 * G - 1)
    kv[: G - 1] = vm  # d < 0, direction -1
    kv[G:] = vp
    kv[G - 1] = spherical_mean(kernel)
    return kv


def _offset_kernel_values_2d(kernel: Kernel, domain: Domain) -> np.ndarray:
    """Kernel at offsets (d1, d2) h; spherical mean at the zero offset."""
    G, h = domain.points_per_axis, domain.spacing
    d = (np.arange(2 * G - 1) - (G - 1)) * h
    D1, D2 = np.meshgrid(d, d, indexing="ij")
    pts = np.column_stack([D1.ravel(), D2.ravel()])
    norms = np.sqrt(np.sum(pts * pts, axis=1))
    safe = pts.copy()
    zero = norms == 0.0
    safe[zero] = (1.0, 0.0)
    vals = np.asarray(eval_kernel(kernel, safe), dtype=np.float64)
    vals[zero] = spherical_mean(kernel)
    return vals.reshape(2 * G - 1, 2 * G - 1)


# Pair tables for the m = 2, n = 1 integral path are expensive to build and
# reused across corpus members; small FIFO cache keyed by grid and kernels.
# The lock keeps eviction safe when callers fan out over threads.
_PAIR_CACHE: dict = {}
_PAIR_CACHE_MAX = 4
_PAIR_CACHE_LOCK = threading.Lock()


def _pair_table(domain: Domain, alpha: float, k1: Kernel, k2: Kernel) -> np.ndarray:
    key = (domain, alpha, k1.cache_key(), k2.cache_key())
    with _PAIR_CACHE_LOCK:
        hit = _PAIR_CACHE.get(key)
    if hit is not None:
        return hit
    G, h = domain.points_per_axis, domain.spacing
    # reversed orientation: row i corresponds to offset d = (G-1) - i
    d_rev = ((G - 1) - np.arange(2 * G - 1)) * h
    kv1 = _offset_kernel_values_1d(k1, G)[::-1].copy()
    kv2 = _offset_kernel_values_1d(k2, G)[::-1].copy()
    d2 = d_rev * d_rev
    tab = d2[:, None] + d2[None, :]
    with np.errstate(divide="ignore"):
        np.power(tab, (alpha - 2.0) / 2.0, out=tab)
    tab[G - 1, G - 1] = 0.0  # singular diagonal node, replaced separately
    tab *= kv1[:, None]
    tab *= kv2[None, :]
    with _PAIR_CACHE_LOCK:
        if len(_PAIR_CACHE) >= _PAIR_CACHE_MAX:
            _PAIR_CACHE.pop(next(iter(_PAIR_CACHE)))
        _PAIR_CACHE[key] = tab
    return tab


def _fi_grid_1d_m1(domain, alpha, kernels, fs):
    G, h = domain.points_per_axis, domain.spacing
    kv = _offset_kernel_values_1d(kernels[0], G)
    d = np.abs(np.arange(2 * G - 1) - (G - 1)) * h
    w = np.zeros(2 * G - 1)
    nz = d > 0.0
    w[nz] = kv[nz] * d[nz] ** (alpha - 1.0) * h
    out = np.convolve(fs[0].values, w)[G - 1: 2 * G - 1]
    corr = spherical_mean(kernels[0]) * h ** alpha * unit_cell_integral(1, alpha)
    return out + corr * fs[0].values


def _fi_grid_1d_m2(domain, alpha, kernels, fs):
    G, h = domain.points_per_axis, domain.spacing
    tab = _pair_table(domain, alpha, kernels[0], kernels[1])
    f1, f2 = fs[0].values, fs[1].values
    out = np.empty(G)
    for k in range(G):
        block = tab[G - 1 - k: 2 * G - 1 - k, G - 1 - k: 2 * G - 1 - k]
        out[k] = f1 @ block @ f2
    out *= h * h
    corr = (
        spherical_mean(kernels[0]) * spherical_mean(kernels[1])
        * h ** alpha * unit_cell_integral(2, alpha)
    )
    return out + corr * f1 * f2


def _fi_grid_1d_m3(domain, alpha, kernels, fs):
    G, h = domain.points_per_axis, domain.spacing
    kvr = [_offset_kernel_values_1d(k, G)[::-1].copy() for k in kernels]
    d_rev = ((G - 1) - np.arange(2 * G - 1)) * h
    d2 = d_rev * d_rev
    out = np.empty(G)
    for k in range(G):
        sl = slice(G - 1 - k, 2 * G - 1 - k)
        a = d2[sl]
        g = [kvr[i][sl] * fs[i].values for i in range(3)]
        with np.errstate(divide="ignore"):
            T = (a[:, None, None] + a[None, :, None] + a[None, None, :]) ** ((alpha - 3.0) / 2.0)
        T[k, k, k] = 0.0
        out[k] = np.einsum("i,j,l,ijl->", g[0], g[1], g[2], T)
    out *= h ** 3
    corr = math.prod(spherical_mean(k) for k in kernels)
    corr *= h ** alpha * unit_cell_integral(3, alpha)
    return out + corr * fs[0].values * fs[1].values * fs[2].values


def _fi_grid_2d_m1(domain, alpha, kernels, fs):
    G, h = domain.points_per_axis, domain.spacing
    kv = _offset_kernel_values_2d(kernels[0], domain)
    d = (np.arange(2 * G - 1) - (G - 1)) * h
    d2 = d * d
    tab = d2[:, None] + d2[None, :]
    with np.errstate(divide="ignore"):
        np.power(tab, (alpha - 2.0) / 2.0, out=tab)
    tab[G - 1, G - 1] = 0.0
    tab *= kv
    tab = tab[::-1, ::-1].copy()
    f = fs[0].reshaped()
    out = np.empty((G, G))
    for k1 in range(G):
        rows = tab[G - 1 - k1: 2 * G - 1 - k1]
        for k2 in range(G):
            out[k1, k2] = np.vdot(f, rows[:, G - 1 - k2: 2 * G - 1 - k2])
    out *= h * h
    corr = spherical_mean(kernels[0]) * h ** alpha * unit_cell_integral(2, alpha)
    return out.ravel() + corr * fs[0].values


def _fi_grid_2d_m2(domain, alpha, kernels, fs):
    G = domain.points_per_axis
    if G > 48:
        raise ValueError(
            f"full-grid m=2, n=2 evaluation is O(G^6); G={G} exceeds the cap of 48"
        )
    h = domain.spacing
    pts = cell_centers(domain)
    N = domain.size
    out = np.empty(N)
    f1, f2 = fs[0].values, fs[1].values
    mean1 = spherical_mean(kernels[0])
    mean2 = spherical_mean(kernels[1])
    corr = mean1 * mean2 * h ** alpha * unit_cell_integral(4, alpha)
    for idx in range(N):
        diff = pts[idx] - pts
        a = np.sum(diff * diff, axis=1)
        zero = a == 0.0
        safe = diff.copy()
        safe[zero] = (1.0, 0.0)
        kv1 = np.asarray(eval_kernel(kernels[0], safe))
        kv2 = np.asarray(eval_kernel(kernels[1], safe))
        kv1[zero] = mean1
        kv2[zero] = mean2
        g1 = kv1 * f1
        g2 = kv2 * f2
        with np.errstate(divide="ignore"):
            T = (a[:, None] + a[None, :]) ** ((alpha - 4.0) / 2.0)
        if np.any(zero):
            z = int(np.flatnonzero(zero)[0])
            T[z, z] = 0.0
        out[idx] = g1 @ T @ g2
    out *= h ** 4
    return out + corr * f1 * f2


def eval_fractional_integral(spec: OperatorSpec, fs, output_domain: Domain | None = None) -> EvalReport:
    """T_{Omega,alpha;m} on the full grid (or at another domain's centers)."""
    if spec.kind != "fractional_integral":
        raise ValueError(f"spec kind {spec.kind!r} is not 'fractional_integral'")
    domain = _check_common(spec, fs)
    mn = spec.m * domain.n
    if not (0.0 < spec.alpha < mn):
        raise ValueError(f"alpha={spec.alpha} not in (0, mn)=(0, {mn})")
    kernels = _kernels_of(spec, domain.n)
    t0 = time.perf_counter()
    if output_domain is None or output_domain == domain:
        key = (domain.n, spec.m)
        if key == (1, 1):
            vals = _fi_grid_1d_m1(domain, spec.alpha, kernels, fs)
        elif key == (1, 2):
            vals = _fi_grid_1d_m2(domain, spec.alpha, kernels, fs)
        elif key == (1, 3):
            vals = _fi_grid_1d_m3(domain, spec.alpha, kernels, fs)
        elif key == (2, 1):
            vals = _fi_grid_2d_m1(domain, spec.alpha, kernels, fs)
        elif key == (2, 2):
            vals = _fi_grid_2d_m2(domain, spec.alpha, kernels, fs)
        else:
            raise ValueError(f"(n, m) = {key} is outside the supported cost envelope")
        out_domain = domain
        skipped = domain.size
    else:
        pts = cell_centers(output_domain)
        vals = np.array([
            fractional_integral_at(spec, fs, pts[i]) for i in range(output_domain.size)
        ])
        out_domain = output_domain
        skipped = output_domain.size
    return EvalReport(
        output=GridFunction(out_domain, vals),
        skipped_singular_nodes=skipped,
        wall_time=time.perf_counter() - t0,
        h=domain.spacing,
    )


def _singular_region_axes(domain: Domain, x: np.ndarray) -> list | None:
    """Per-axis cell indices whose closure contains the coordinate of x."""
    c = axis_centers(domain)
    h = domain.spacing
    axes = []
    for d in range(domain.n):
        near = np.flatnonzero(np.abs(c - x[d]) <= 0.5 * h * (1.0 + 1e-9))
        if near.size == 0:
            return None
        axes.append(near)
    return axes


def _region_flat_indices(domain: Domain, axes: list) -> np.ndarray:
    if domain.n == 1:
        return axes[0]
    G = domain.points_per_axis
    return (axes[0][:, None] * G + axes[1][None, :]).ravel()


def _region_correction(domain: Domain, axes: list, x: np.ndarray, m: int, alpha: float) -> float:
    """Refined midpoint (h/4 subcells) of |y vec - x vec|^{alpha - mn} over the region."""
    c = axis_centers(domain)
    h = domain.spacing
    sub = np.array([-0.375, -0.125, 0.125, 0.375]) * h
    per_axis = []
    for d in range(domain.n):
        pts = (c[axes[d]][:, None] + sub[None, :]).ravel() - x[d]
        per_axis.append(pts)
    # the y vector ranges over region^m; coordinates repeat slot by slot
    coords = per_axis * m
    grids = np.meshgrid(*coords, indexing="ij")
    r2 = np.zeros(grids[0].shape)
    for g in grids:
        r2 += g * g
    vals = r2 ** ((alpha - m * domain.n) / 2.0)
    return float(np.sum(vals) * (h / 4.0) ** (m * domain.n))


def fractional_integral_at(spec: OperatorSpec, fs, x) -> float:
    """T_{Omega,alpha;m}(f vec) at an arbitrary point x in [-L, L]^n."""
    if spec.kind != "fractional_integral":
        raise ValueError(f"spec kind {spec.kind!r} is not 'fractional_integral'")
    domain = _check_common(spec, fs)
    mn = spec.m * domain.n
    if not (0.0 < spec.alpha < mn):
        raise ValueError(f"alpha={spec.alpha} not in (0, mn)=(0, {mn})")
    kernels = _kernels_of(spec, domain.n)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.shape != (domain.n,):
        raise ValueError(f"evaluation point must have shape ({domain.n},)")
    pts = cell_centers(domain)
    h = domain.spacing
    diff = x[None, :] - pts
    a = np.sum(diff * diff, axis=1)
    zero = a == 0.0
    safe = np.where(zero[:, None], 1.0, diff)
    g = []
    for i, kern in enumerate(kernels):
        kv = np.asarray(eval_kernel(kern, safe), dtype=np.float64).reshape(-1)
        if np.any(zero):
            kv[zero] = spherical_mean(kern)
        g.append(kv * fs[i].values)
    axes = _singular_region_axes(domain, x)
    if spec.m == 1:
        with np.errstate(divide="ignore"):
            w = a ** ((spec.alpha - domain.n) / 2.0)
        if axes is not None:
            w[_region_flat_indices(domain, axes)] = 0.0
        total = float(np.dot(g[0], w)) * h ** domain.n
    elif spec.m == 2:
        T = a[:, None] + a[None, :]
        with np.errstate(divide="ignore"):
            np.power(T, (spec.alpha - mn) / 2.0, out=T)
        if axes is not None:
            reg = _region_flat_indices(domain, axes)
            T[np.ix_(reg, reg)] = 0.0
        total = float(g[0] @ T @ g[1]) * h ** (2 * domain.n)
    else:
        raise ValueError("point evaluation supports m <= 2")
    if axes is not None:
        reg = _region_flat_indices(domain, axes)
        q = _region_correction(domain, axes, x, spec.m, spec.alpha)
        weight = 1.0
        for i, kern in enumerate(kernels):
            weight *= spherical_mean(kern) * float(np.mean(fs[i].values[reg]))
        total += q * weight
    return total


# -- maximal operators --------------------------------------------------------


def _window_halfwidth(r: float, h: float) -> int:
    # offsets d with |d| h < r, i.e. |d| <= ceil(r/h) - 1 (integer r/h included)
    return max(int(math.ceil(r / h - 1e-9)) - 1, 0)


def _window_sums_1d(pf: np.ndarray, G: int, W: int):
    """(left, right) sums over j in [k-W, k-1] and [k+1, k+W], clipped."""
    k = np.arange(G)
    lo = np.maximum(k - W, 0)
    hi = np.minimum(k + W + 1, G)
    left = pf[k] - pf[lo]
    right = pf[hi] - pf[k + 1]
    return left, right


def _abs_side_weights(kernel: Kernel):
    wp = abs(eval_kernel(kernel, np.array([1.0])))
    wm = abs(eval_kernel(kernel, np.array([-1.0])))
    return wp, wm, 0.5 * (wp + wm)


def _ball_sums_2d_const(fa: np.ndarray, G: int, R: int) -> np.ndarray:
    """sum of fa over lattice offsets |d| < R around every cell, truncated."""
    pf = np.zeros((G, G + 1))
    np.cumsum(fa, axis=1, out=pf[:, 1:])
    out = np.zeros((G, G))
    k = np.arange(G)
    for di in range(-(R - 1), R):
        rem = R * R - di * di
        if rem <= 0:
            continue
        Wd = math.ceil(math.sqrt(rem)) - 1
        rows_to = k[(k + di >= 0) & (k + di < G)]
        rows_from = rows_to + di
        lo = np.maximum(k - Wd, 0)
        hi = np.minimum(k + Wd + 1, G)
        out[rows_to] += pf[rows_from][:, hi] - pf[rows_from][:, lo]
    return out


def _is_const_abs(kernel: Kernel) -> bool:
    # |Omega| constant on the sphere: constants, signs, and 1D anything
    return kernel.n == 1 or kernel.form in ("constant", "sign_axis")


def _abs_const_value(kernel: Kernel) -> float:
    if kernel.form == "constant":
        return abs(kernel.c)
    return 1.0  # sign kernels


def eval_fractional_maximal(spec: OperatorSpec, fs) -> EvalReport:
    """Centered M_{Omega,alpha;m} over the dyadic ladder, continuum m(B)."""
    if spec.kind != "fractional_maximal_centered":
        raise ValueError(f"spec kind {spec.kind!r} is not 'fractional_maximal_centered'")
    domain = _check_common(spec, fs)
    mn = spec.m * domain.n
    if not (0.0 <= spec.alpha < mn):
        raise ValueError(f"alpha={spec.alpha} not in [0, mn)=[0, {mn})")
    kernels = _kernels_of(spec, domain.n)
    ladder = spec.ladder or default_radius_ladder(domain)
    G, h, n = domain.points_per_axis, domain.spacing, domain.n
    vn = unit_ball_volume(n)
    t0 = time.perf_counter()
    out = np.zeros(domain.size)
    if n == 1:
        pfs, absf, weights = [], [], []
        for i, f in enumerate(fs):
            af = np.abs(f.values)
            pf = np.concatenate([[0.0], np.cumsum(af)])
            pfs.append(pf)
            absf.append(af)
            weights.append(_abs_side_weights(kernels[i]))
        for r in ladder:
            W = _window_halfwidth(r, h)
            scale = (vn * r ** n) ** (spec.alpha / mn - 1.0)
            cand = np.ones(G)
            for i in range(spec.m):
                wp, wm, w0 = weights[i]
                left, right = _window_sums_1d(pfs[i], G, W)
                cand *= scale * h * (wp * left + wm * right + w0 * absf[i])
            np.maximum(out, cand, out=out)
    else:
        const_fast = all(_is_const_abs(k) for k in kernels)
        fa = [np.abs(f.reshaped()) for f in fs]
        for r in ladder:
            R = _window_halfwidth(r, h) + 1
            scale = (vn * r ** n) ** (spec.alpha / mn - 1.0)
            cand = np.ones((G, G))
            if const_fast:
                for i in range(spec.m):
                    s = _ball_sums_2d_const(fa[i], G, R) * (h * h) * _abs_const_value(kernels[i])
                    cand *= scale * s
            else:
                for i in range(spec.m):
                    s = _ball_sums_2d_stencil(fa[i], kernels[i], domain, R)
                    cand *= scale * s * (h * h)
            np.maximum(out, cand.ravel(), out=out)
    return EvalReport(
        output=GridFunction(domain, out),
        skipped_singular_nodes=0,
        wall_time=time.perf_counter() - t0,
        h=h,
    )


def _ball_sums_2d_stencil(fa: np.ndarray, kernel: Kernel, domain: Domain, R: int) -> np.ndarray:
    """Weighted ball sums with |Omega(x - y)| varying over the angle. O(R^2 G^2)."""
    G, h = domain.points_per_axis, domain.spacing
    out = np.zeros((G, G))
    mean_abs = spherical_mean(kernel, absolute=True)
    for di in range(-(R - 1), R):
        rem = R * R - di * di
        if rem <= 0:
            continue
        Wd = math.ceil(math.sqrt(rem)) - 1
        for dj in range(-Wd, Wd + 1):
            if di == 0 and dj == 0:
                w = mean_abs
            else:
                # y = x + (di, dj) h so the kernel argument is -(di, dj) h
                w = abs(eval_kernel(kernel, np.array([-di * h, -dj * h])))
            r0, r1 = max(0, -di), min(G, G - di)
            c0, c1 = max(0, -dj), min(G, G - dj)
            out[r0:r1, c0:c1] += w * fa[r0 + di: r1 + di, c0 + dj: c1 + dj]
    return out


def fractional_maximal_at(spec: OperatorSpec, fs, x) -> float:
    """Centered M_{Omega,alpha;m} at an arbitrary point."""
    if spec.kind != "fractional_maximal_centered":
        raise ValueError(f"spec kind {spec.kind!r} is not 'fractional_maximal_centered'")
    domain = _check_common(spec, fs)
    mn = spec.m * domain.n
    if not (0.0 <= spec.alpha < mn):
        raise ValueError(f"alpha={spec.alpha} not in [0, mn)=[0, {mn})")
    kernels = _kernels_of(spec, domain.n)
    ladder = spec.ladder or default_radius_ladder(domain)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    pts = cell_centers(domain)
    h, n = domain.spacing, domain.n
    vn = unit_ball_volume(n)
    best = 0.0
    for r in ladder:
        runs = ball_cell_runs(domain, x, r)
        if not runs:
            continue
        idx = np.concatenate([np.arange(lo, hi) for lo, hi in runs])
        diff = x[None, :] - pts[idx]
        a2 = np.sum(diff * diff, axis=1)
        zero = a2 == 0.0
        safe = np.where(zero[:, None], 1.0, diff)
        scale = (vn * r ** n) ** (spec.alpha / mn - 1.0)
        val = 1.0
        for i, kern in enumerate(kernels):
            kv = np.abs(np.asarray(eval_kernel(kern, safe), dtype=np.float64).reshape(-1))
            if np.any(zero):
                kv[zero] = spherical_mean(kern, absolute=True)
            s = float(np.dot(kv, np.abs(fs[i].values[idx]))) * h ** n
            val *= scale * s
        best = max(best, val)
    return best


def eval_noncentered_maximal(spec: OperatorSpec, fs, family) -> EvalReport:
    """Non-centered variant: supremum over family balls containing the point.

    With constant kernels each ball's value is x-independent, computed once
    and distributed; otherwise the integral is recomputed per covered cell,
    which is quadratic and only meant for small grids.
    """
    if spec.kind != "fractional_maximal_noncentered":
        raise ValueError(f"spec kind {spec.kind!r} is not 'fractional_maximal_noncentered'")
    domain = _check_common(spec, fs)
    if family.domain != domain:
        raise ValueError("ball family and inputs must share one domain")
    mn = spec.m * domain.n
    if not (0.0 <= spec.alpha < mn):
        raise ValueError(f"alpha={spec.alpha} not in [0, mn)=[0, {mn})")
    kernels = _kernels_of(spec, domain.n)
    h, n = domain.spacing, domain.n
    pts = cell_centers(domain)
    t0 = time.perf_counter()
    out = np.zeros(domain.size)
    const = all(k.form == "constant" for k in kernels)
    for ball in family.balls:
        runs = ball_cell_runs(domain, ball.center, ball.radius)
        if not runs:
            continue
        idx = np.concatenate([np.arange(lo, hi) for lo, hi in runs])
        scale = ball.measure ** (spec.alpha / mn - 1.0)
        if const:
            val = 1.0
            for i, kern in enumerate(kernels):
                s = float(np.sum(np.abs(fs[i].values[idx]))) * h ** n * abs(kern.c)
                val *= scale * s
            out[idx] = np.maximum(out[idx], val)
        else:
            for cell in idx:
                diff = pts[cell][None, :] - pts[idx]
                a2 = np.sum(diff * diff, axis=1)
                zero = a2 == 0.0
                safe = np.where(zero[:, None], 1.0, diff)
                val = 1.0
                for i, kern in enumerate(kernels):
                    kv = np.abs(np.asarray(eval_kernel(kern, safe), dtype=np.float64).reshape(-1))
                    if np.any(zero):
                        kv[zero] = spherical_mean(kern, absolute=True)
                    s = float(np.dot(kv, np.abs(fs[i].values[idx]))) * h ** n
                    val *= scale * s
                out[cell] = max(out[cell], val)
    return EvalReport(
        output=GridFunction(domain, out),
        skipped_singular_nodes=0,
        wall_time=time.perf_counter() - t0,
        h=h,
    )


def _lerner_grid(fs, ladder) -> np.ndarray:
    """Products of cell-count ball averages of |f_i|, sup over the ladder."""
    domain = fs[0].domain
    G, h, n = domain.points_per_axis, domain.spacing, domain.n
    out = np.zeros(domain.size)
    if n == 1:
        pfs = [np.concatenate([[0.0], np.cumsum(np.abs(f.values))]) for f in fs]
        absf = [np.abs(f.values) for f in fs]
        k = np.arange(G)
        for r in ladder:
            W = _window_halfwidth(r, h)
            lo = np.maximum(k - W, 0)
            hi = np.minimum(k + W + 1, G)
            count = (hi - lo).astype(np.float64)
            cand = np.ones(G)
            for i in range(len(fs)):
                cand *= (pfs[i][hi] - pfs[i][lo]) / count
            np.maximum(out, cand, out=out)
    else:
        fa = [np.abs(f.reshaped()) for f in fs]
        ones = np.ones((G, G))
        for r in ladder:
            R = _window_halfwidth(r, h) + 1
            count = _ball_sums_2d_const(ones, G, R)
            cand = np.ones((G, G))
            for i in range(len(fs)):
                cand *= _ball_sums_2d_const(fa[i], G, R) / count
            np.maximum(out, cand.ravel(), out=out)
    return out


def eval_lerner_maximal(fs, ladder=None) -> GridFunction:
    """M(f vec): products of plain averages over one shared ball."""
    fs = list(fs)
    domain = fs[0].domain
    for f in fs:
        if f.domain != domain:
            raise ValueError("all inputs must share one domain")
    ladder = tuple(ladder) if ladder else default_radius_ladder(domain)
    return GridFunction(domain, _lerner_grid(fs, ladder))


def lerner_maximal_at(fs, x, ladder=None) -> float:
    fs = list(fs)
    domain = fs[0].domain
    ladder = tuple(ladder) if ladder else default_radius_ladder(domain)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    best = 0.0
    for r in ladder:
        runs = ball_cell_runs(domain, x, r)
        count = sum(hi - lo for lo, hi in runs)
        if count == 0:
            continue
        val = 1.0
        for f in fs:
            tot = sum(float(np.sum(np.abs(f.values[lo:hi]))) for lo, hi in runs)
            val *= tot / count
        best = max(best, val)
    return best


def eval_power_maximal(fs, s_prime: float, ladder=None) -> GridFunction:
    """M_{s'}(f vec) = [M(|f_1|^{s'}, .., |f_m|^{s'})]^{1/s'}."""
    if not (s_prime >= 1.0 and math.isfinite(s_prime)):
        raise ValueError(f"s'={s_prime} must be finite and >= 1")
    fs = list(fs)
    domain = fs[0].domain
    powered = [GridFunction(domain, np.abs(f.values) ** s_prime) for f in fs]
    ladder = tuple(ladder) if ladder else default_radius_ladder(domain)
    vals = _lerner_grid(powered, ladder) ** (1.0 / s_prime)
    return GridFunction(domain, vals)


def power_maximal_at(fs, s_prime: float, x, ladder=None) -> float:
    if not (s_prime >= 1.0 and math.isfinite(s_prime)):
        raise ValueError(f"s'={s_prime} must be finite and >= 1")
    fs = list(fs)
    domain = fs[0].domain
    powered = [GridFunction(domain, np.abs(f.values) ** s_prime) for f in fs]
    return lerner_maximal_at(powered, x, ladder) ** (1.0 / s_prime)


def eval_bilinear_grafakos(f: GridFunction, g: GridFunction, alpha: float) -> GridFunction:
    """B_alpha(f, g)(x) = integral f(x + t) g(x - t) |t|^{alpha - n} dt.

    Midpoint sum over the offset lattice; the t = 0 cell uses the refined
    local integral. The symmetry B(f, g) = B(g, f) is exact because the
    offsets t and -t carry equal weights and swap the two factors.
    """
    domain = f.domain
    if g.domain != domain:
        raise ValueError("both inputs must share one domain")
    n, G, h = domain.n, domain.points_per_axis, domain.spacing
    if not (0.0 < alpha < n):
        raise ValueError(f"alpha={alpha} not in (0, n)=(0, {n})")
    corr = h ** alpha * unit_cell_integral(n, alpha)
    if n == 1:
        fv, gv = f.values, g.values
        out = corr * (fv * gv)
        for d in range(1, G):
            # k + d and k - d must both be in range: k in [d, G - 1 - d]
            if d > G - 1 - d:
                break
            w = h * (d * h) ** (alpha - 1.0)
            out[d: G - d] += w * (
                fv[2 * d:] * gv[: G - 2 * d] + fv[: G - 2 * d] * gv[2 * d:]
            )
        return GridFunction(domain, out)
    fv, gv = f.reshaped(), g.reshaped()
    out = corr * (fv * gv)
    # each offset pair {+d, -d} is accumulated in one expression so that
    # swapping f and g only commutes products and one addition: exact symmetry
    for d1 in range(0, G):
        a1, b1 = d1, G - d1
        if b1 <= a1:
            continue
        for d2 in range(-(G - 1), G):
            if d1 == 0 and d2 <= 0:
                continue
            a2, b2 = abs(d2), G - abs(d2)
            if b2 <= a2:
                continue
            w = h * h * ((d1 * d1 + d2 * d2) * h * h) ** ((alpha - 2.0) / 2.0)
            out[a1:b1, a2:b2] += w * (
                fv[a1 + d1: b1 + d1, a2 + d2: b2 + d2]
                * gv[a1 - d1: b1 - d1, a2 - d2: b2 - d2]
                + fv[a1 - d1: b1 - d1, a2 - d2: b2 - d2]
                * gv[a1 + d1: b1 + d1, a2 + d2: b2 + d2]
            )
    return GridFunction(domain, out.ravel())
