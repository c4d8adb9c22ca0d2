"""Homogeneous kernels on R^n and their sphere norms.

A kernel Omega is homogeneous of degree zero: its value depends only on the
direction x/|x|. Supported forms are constants, angular powers
|x' . e_axis|^{-beta}, the sign of one coordinate, and (for n = 2) tabulated
piecewise-constant functions of the angle.

Sphere norms use the unnormalized surface measure sigma: arc length on S^1
(total 2 pi) and counting measure on S^0 = {-1, +1} (total 2). With this
convention the ball bound

    (integral_{|x| < R} |Omega(x)|^s dx)^{1/s}
        = (1/n)^{1/s} ||Omega||_{L^s(S^{n-1})} R^{n/s}

is an identity, which ball_kernel_norm evaluates in closed form.

For n = 2 the sphere norm is a 4096-point midpoint rule in the angle.
Angular powers have an integrable power singularity where the projected
coordinate vanishes; those integrals are computed by subtracting a local
two-term model and adding its integral back in closed form. The subtraction
windows are aligned to quadrature cell boundaries so the piecewise
definition costs no accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Kernel",
    "constant_kernel",
    "angular_power_kernel",
    "sign_kernel",
    "table_kernel",
    "parse_kernel",
    "eval_kernel",
    "sphere_norm",
    "ball_kernel_norm",
    "spherical_mean",
    "sphere_measure",
]

_DEFAULT_ANGULAR_POINTS = 4096


def sphere_measure(n: int) -> float:
    """Total sigma-measure of S^{n-1}: 2 for n = 1, 2 pi for n = 2."""
    if n == 1:
        return 2.0
    if n == 2:
        return 2.0 * math.pi
    raise ValueError(f"dimension n={n} not supported, expected 1 or 2")


@dataclass(frozen=True)
class Kernel:
    """Degree-zero homogeneous kernel.

    form is one of 'constant', 'angular_power', 'sign_axis', 'table'.
    axis is 1-based. table holds per-sector values on a uniform angular
    partition of [0, 2 pi) and is only meaningful for n = 2.
    """

    n: int
    form: str
    c: float = 1.0
    beta: float = 0.0
    axis: int = 1
    table: tuple = ()

    def cache_key(self) -> str:
        if self.form == "constant":
            return f"const:{self.c!r}"
        if self.form == "angular_power":
            return f"angpow:{self.beta!r}:{self.axis}"
        if self.form == "sign_axis":
            return f"sign:{self.axis}"
        return f"table:{hash(self.table)}"


def constant_kernel(n: int, c: float = 1.0) -> Kernel:
    return Kernel(n=n, form="constant", c=float(c))


def angular_power_kernel(n: int, beta: float, axis: int = 1) -> Kernel:
    """Omega(x) = |(x/|x|) . e_axis|^{-beta}."""
    if axis not in range(1, n + 1):
        raise ValueError(f"axis {axis} out of range for n={n}")
    return Kernel(n=n, form="angular_power", beta=float(beta), axis=axis)


def sign_kernel(n: int, axis: int = 1) -> Kernel:
    if axis not in range(1, n + 1):
        raise ValueError(f"axis {axis} out of range for n={n}")
    return Kernel(n=n, form="sign_axis", axis=axis)


def table_kernel(values) -> Kernel:
    """Piecewise-constant kernel in the angle, n = 2 only.

    values[j] applies on the sector [j, j+1) * 2 pi / len(values).
    """
    vals = tuple(float(v) for v in values)
    if len(vals) < 1:
        raise ValueError("table kernel needs at least one sector value")
    return Kernel(n=2, form="table", table=vals)


def parse_kernel(n: int, descriptor: str) -> Kernel:
    """Parse 'const:c', 'angpow:beta:axis', or 'sign:axis'."""
    parts = descriptor.strip().split(":")
    try:
        if parts[0] == "const" and len(parts) == 2:
            return constant_kernel(n, float(parts[1]))
        if parts[0] == "angpow" and len(parts) == 3:
            return angular_power_kernel(n, float(parts[1]), int(parts[2]))
        if parts[0] == "sign" and len(parts) == 2:
            return sign_kernel(n, int(parts[1]))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad kernel descriptor {descriptor!r}: {exc}") from None
    raise ValueError(f"bad kernel descriptor {descriptor!r}")


def _table_lookup(kernel: Kernel, theta: np.ndarray) -> np.ndarray:
    M = len(kernel.table)
    idx = np.floor(np.mod(theta, 2.0 * math.pi) / (2.0 * math.pi / M)).astype(int)
    idx = np.clip(idx, 0, M - 1)
    return np.asarray(kernel.table)[idx]


def eval_kernel(kernel: Kernel, x) -> np.ndarray | float:
    """Evaluate Omega at one point (shape (n,)) or many (shape (N, n)).

    The origin is outside the domain of a homogeneous kernel; a zero vector
    raises. Angular powers may evaluate to +inf along directions where the
    projected coordinate vanishes (beta > 0); that is the honest value.
    """
    pts = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if pts.shape[1] != kernel.n:
        raise ValueError(f"point dimension {pts.shape[1]} != kernel dimension {kernel.n}")
    norms = np.sqrt(np.sum(pts * pts, axis=1))
    if np.any(norms == 0.0):
        raise ValueError("kernel evaluated at the origin; homogeneous kernels are undefined there")
    if kernel.form == "constant":
        out = np.full(pts.shape[0], kernel.c)
    elif kernel.form == "sign_axis":
        out = np.sign(pts[:, kernel.axis - 1])
    elif kernel.form == "angular_power":
        t = np.abs(pts[:, kernel.axis - 1]) / norms
        with np.errstate(divide="ignore"):
            out = t ** (-kernel.beta)
    else:
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        out = _table_lookup(kernel, theta)
    if np.ndim(x) <= 1:
        return float(out[0])
    return out


# -- angular integration (n = 2) ---------------------------------------------


def _angular_power_integral(gamma: float, M: int, axis: int) -> float:
    """integral_0^{2 pi} |cos theta|^{-gamma} d theta (axis 1; sin for axis 2).

    gamma < 1 required. For gamma <= 0 a plain midpoint rule is enough. For
    0 < gamma < 1 the integrand is modeled near each zero theta_k by
    |u|^{-gamma} (1 + gamma u^2 / 6), u = theta - theta_k, whose integral
    over the window is closed-form; the remainder is O(|u|^{4-gamma}) and is
    left to the midpoint rule. Windows span M//8 whole quadrature cells on
    each side of a zero, so no cell straddles a window edge (M % 8 == 0 and
    the zeros sit on cell boundaries).
    """
    delta = 2.0 * math.pi / M
    theta = (np.arange(M) + 0.5) * delta
    proj = np.cos(theta) if axis == 1 else np.sin(theta)
    vals = np.abs(proj) ** (-gamma)
    if gamma <= 0.0:
        return float(np.sum(vals) * delta)
    if M % 8 != 0:
        raise ValueError(f"angular point count M={M} must be divisible by 8")
    zeros = (math.pi / 2.0, 3.0 * math.pi / 2.0) if axis == 1 else (0.0, math.pi)
    w = (M // 8) * delta
    total = float(np.sum(vals) * delta)
    for z in zeros:
        u = theta - z
        u = np.mod(u + math.pi, 2.0 * math.pi) - math.pi  # periodic distance
        inside = np.abs(u) < w - 0.5 * delta * 1e-9
        model = np.abs(u[inside]) ** (-gamma) * (1.0 + gamma * u[inside] ** 2 / 6.0)
        total -= float(np.sum(model) * delta)
        total += 2.0 * w ** (1.0 - gamma) / (1.0 - gamma)
        total += (gamma / 3.0) * w ** (3.0 - gamma) / (3.0 - gamma)
    return total


def _angular_abs_power_integral(kernel: Kernel, power: float, M: int) -> float:
    """integral over S^1 of |Omega|^power d sigma."""
    if kernel.form == "constant":
        return 2.0 * math.pi * abs(kernel.c) ** power
    if kernel.form == "sign_axis":
        return 2.0 * math.pi
    if kernel.form == "table":
        sector = 2.0 * math.pi / len(kernel.table)
        return float(np.sum(np.abs(np.asarray(kernel.table)) ** power) * sector)
    # angular power: |Omega|^power = |proj|^{-beta * power}
    gamma = kernel.beta * power
    if gamma >= 1.0:
        raise ValueError(
            f"Omega is not in L^s(S^1): beta*s = {gamma} >= n-1 = 1"
        )
    return _angular_power_integral(gamma, M, kernel.axis)


def sphere_norm(kernel: Kernel, s: float, angular_points: int = _DEFAULT_ANGULAR_POINTS) -> float:
    """||Omega||_{L^s(S^{n-1})} with the unnormalized surface measure.

    s >= 1 or inf. For n = 1 this is an exact two-point sum. For n = 2 the
    default is a 4096-point midpoint rule; table kernels are summed exactly
    sector by sector, and angular powers use the subtracted rule. Raises
    when Omega is not in L^s (angular power with beta * s >= n - 1, or an
    unbounded kernel at s = inf).
    """
    if not (s >= 1.0):
        raise ValueError(f"sphere norm needs s >= 1, got s={s}")
    if kernel.n == 1:
        vm = eval_kernel(kernel, np.array([-1.0]))
        vp = eval_kernel(kernel, np.array([1.0]))
        if math.isinf(s):
            return max(abs(vm), abs(vp))
        return (abs(vm) ** s + abs(vp) ** s) ** (1.0 / s)
    if math.isinf(s):
        if kernel.form == "constant":
            return abs(kernel.c)
        if kernel.form == "sign_axis":
            return 1.0
        if kernel.form == "table":
            return float(np.max(np.abs(kernel.table)))
        if kernel.beta > 0.0:
            raise ValueError("Omega is not in L^inf(S^1): angular power is unbounded")
        return 1.0
    return _angular_abs_power_integral(kernel, s, angular_points) ** (1.0 / s)


def ball_kernel_norm(kernel: Kernel, s: float, R: float) -> float:
    """(integral_{|x| < R} |Omega|^s)^{1/s} = (1/n)^{1/s} ||Omega||_s R^{n/s}.

    Exact for homogeneous Omega (polar coordinates); s = inf drops the
    radius factor.
    """
    if R <= 0.0:
        raise ValueError(f"ball radius R={R} must be positive")
    ns = sphere_norm(kernel, s)
    if math.isinf(s):
        return ns
    n = kernel.n
    return (1.0 / n) ** (1.0 / s) * ns * R ** (n / s)


def spherical_mean(kernel: Kernel, absolute: bool = False) -> float:
    """Mean of Omega (or |Omega|) over the sphere, sigma-normalized.

    Used by operator quadrature as the value at a zero vector argument; in
    1D it equals the exact cell mean of Omega over a cell centered at the
    evaluation point. Raises when the mean diverges (angular power with
    beta >= 1).
    """
    if kernel.n == 1:
        vm = eval_kernel(kernel, np.array([-1.0]))
        vp = eval_kernel(kernel, np.array([1.0]))
        if absolute:
            vm, vp = abs(vm), abs(vp)
        return 0.5 * (vm + vp)
    if kernel.form == "constant":
        return abs(kernel.c) if absolute else kernel.c
    if kernel.form == "sign_axis":
        return 1.0 if absolute else 0.0
    if kernel.form == "table":
        vals = np.asarray(kernel.table)
        if absolute:
            vals = np.abs(vals)
        return float(np.mean(vals))
    # angular powers are nonnegative, absolute is moot
    if kernel.beta >= 1.0:
        raise ValueError(f"angular power beta={kernel.beta} has no finite spherical mean")
    return _angular_abs_power_integral(kernel, 1.0, _DEFAULT_ANGULAR_POINTS) / (2.0 * math.pi)


def node_finite(kernel: Kernel) -> bool:
    """Whether kernel values are finite at every nonzero lattice offset.

    Angular powers with beta > 0 in 2D blow up along lattice-aligned
    directions, which midpoint node sets hit; operators reject those.
    """
    return not (kernel.n == 2 and kernel.form == "angular_power" and kernel.beta > 0.0)
