"""Midpoint grids, balls, and test-function corpora on [-L, L]^n.

The whole toolkit discretizes R^n (n = 1 or 2) as a uniform midpoint grid:
G cells per axis of width h = 2L/G, cell centers at -L + (k + 1/2) h. All
quadrature is the midpoint rule on these cells, so a grid function is just
the vector of its cell-center values in row-major order. G is kept even so
that no cell center ever lands on the origin, where the homogeneous kernels
are singular.

Balls are Euclidean and open; the measure attached to a ball is the
continuum one, m(B) = v_n r^n. Families built here use dyadic radius
ladders, and construction checks the undercount property
N(B) h^n <= m(B) (N = number of cell centers inside B), which several exact
discrete inequalities downstream rely on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Domain",
    "GridFunction",
    "Ball",
    "BallFamily",
    "Corpus",
    "make_domain",
    "sample",
    "make_ball_family",
    "default_radius_ladder",
    "make_corpus",
    "member_from_params",
    "unit_ball_volume",
    "cell_centers",
    "axis_centers",
    "ball_cell_runs",
    "ball_cell_count",
    "save_grid_function",
    "load_grid_function",
]

_MAX_G = 2 ** 16


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball: 2 for n = 1, pi for n = 2."""
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    raise ValueError(f"dimension n={n} not supported, expected 1 or 2")


@dataclass(frozen=True)
class Domain:
    """Uniform midpoint grid on [-L, L]^n.

    Attributes
    ----------
    n : spatial dimension, 1 or 2.
    half_width : L, the box half-width.
    points_per_axis : G, cells per axis (even).
    spacing : h = 2L/G, the cell width.
    """

    n: int
    half_width: float
    points_per_axis: int
    spacing: float

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.n


def make_domain(n: int, L: float, G: int) -> Domain:
    """Build the midpoint grid on [-L, L]^n with G cells per axis.

    G must be even (keeps cell centers off the origin) and between 2 and
    2^16; L must be positive.
    """
    if n not in (1, 2):
        raise ValueError(f"dimension n={n} not supported, expected 1 or 2")
    if not (L > 0.0 and math.isfinite(L)):
        raise ValueError(f"half_width L={L} must be positive and finite")
    if not isinstance(G, int) or G % 2 != 0 or not (2 <= G <= _MAX_G):
        raise ValueError(f"points_per_axis G={G} must be an even integer in [2, {_MAX_G}]")
    return Domain(n=n, half_width=float(L), points_per_axis=G, spacing=2.0 * L / G)


def axis_centers(domain: Domain) -> np.ndarray:
    """Cell-center coordinates along one axis, ascending."""
    G, h, L = domain.points_per_axis, domain.spacing, domain.half_width
    return -L + (np.arange(G) + 0.5) * h


def cell_centers(domain: Domain) -> np.ndarray:
    """All cell centers as an array of shape (G^n, n), row-major."""
    c = axis_centers(domain)
    if domain.n == 1:
        return c[:, None]
    x0, x1 = np.meshgrid(c, c, indexing="ij")
    return np.column_stack([x0.ravel(), x1.ravel()])


@dataclass(frozen=True)
class GridFunction:
    """A function sampled at cell centers: flat row-major float64 values."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.domain.size,):
            raise ValueError(
                f"values shape {v.shape} does not match domain size ({self.domain.size},)"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def reshaped(self) -> np.ndarray:
        """Values as a (G,) or (G, G) view, axis 0 first."""
        G = self.domain.points_per_axis
        if self.domain.n == 1:
            return self.values
        return self.values.reshape(G, G)


def sample(domain: Domain, closed_form) -> GridFunction:
    """Sample a closed-form function at every cell center.

    closed_form receives the (G^n, n) array of cell centers and must return
    a finite value per row. A non-finite sample is an error that names the
    offending cell.
    """
    pts = cell_centers(domain)
    vals = np.asarray(closed_form(pts), dtype=np.float64).reshape(-1)
    if vals.shape != (domain.size,):
        raise ValueError(
            f"closed_form returned shape {vals.shape}, expected ({domain.size},)"
        )
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        raise ValueError(
            f"closed_form is not finite at cell {k}, center {tuple(pts[k])}"
        )
    return GridFunction(domain, vals)


@dataclass(frozen=True)
class Ball:
    """Open Euclidean ball with its continuum measure m(B) = v_n r^n."""

    center: tuple
    radius: float
    measure: float = field(default=0.0)

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError(f"ball radius {self.radius} must be positive")
        n = len(self.center)
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.measure == 0.0:
            object.__setattr__(
                self, "measure", unit_ball_volume(n) * self.radius ** n
            )


def default_radius_ladder(domain: Domain) -> tuple:
    """Dyadic radii h, 2h, 4h, ... strictly below 2L, then the cap 2L.

    Deduplicated: when a dyadic rung equals 2L it appears once.
    """
    h, L = domain.spacing, domain.half_width
    radii = []
    r = h
    while r < 2.0 * L and not math.isclose(r, 2.0 * L, rel_tol=1e-12):
        radii.append(r)
        r *= 2.0
    radii.append(2.0 * L)
    return tuple(radii)


def ball_cell_runs(domain: Domain, center, radius: float) -> list:
    """Contiguous flat-index runs [(lo, hi), ...) of cells inside the ball.

    Cells belong to the ball when their center is strictly closer than
    radius. For n = 1 there is a single run; for n = 2 one run per covered
    row. Runs are half-open and clipped to the domain.
    """
    c = axis_centers(domain)
    G = domain.points_per_axis
    if domain.n == 1:
        x0 = float(center[0]) if np.ndim(center) else float(center)
        lo = int(np.searchsorted(c, x0 - radius, side="right"))
        hi = int(np.searchsorted(c, x0 + radius, side="left"))
        # searchsorted('right'/'left') excludes centers exactly at distance r
        return [(lo, hi)] if hi > lo else []
    x0, x1 = float(center[0]), float(center[1])
    rows = []
    i_lo = int(np.searchsorted(c, x0 - radius, side="right"))
    i_hi = int(np.searchsorted(c, x0 + radius, side="left"))
    for i in range(i_lo, i_hi):
        d2 = radius * radius - (c[i] - x0) ** 2
        if d2 <= 0.0:
            continue
        w = math.sqrt(d2)
        j_lo = int(np.searchsorted(c, x1 - w, side="right"))
        j_hi = int(np.searchsorted(c, x1 + w, side="left"))
        if j_hi > j_lo:
            rows.append((i * G + j_lo, i * G + j_hi))
    return rows


def ball_cell_count(domain: Domain, center, radius: float) -> int:
    return sum(hi - lo for lo, hi in ball_cell_runs(domain, center, radius))


@dataclass(frozen=True)
class BallFamily:
    """A finite collection of balls used for Morrey / BMO suprema."""

    domain: Domain
    balls: tuple

    def __len__(self) -> int:
        return len(self.balls)


def _check_undercount(domain: Domain, radii) -> None:
    # N h^n <= v_n r^n for an unclipped lattice ball; clipping only shrinks N.
    # Exact in 1D (N = 2R - 1 < 2R); verified per radius in 2D.
    h, n = domain.spacing, domain.n
    vn = unit_ball_volume(n)
    for r in radii:
        R = r / h
        Ri = round(R)
        if n == 1:
            N = 2 * math.ceil(R) - 1 if abs(R - Ri) > 1e-9 else 2 * Ri - 1
        else:
            Ri = math.ceil(R - 1e-9)
            N = 0
            for k in range(-Ri + 1, Ri):
                rem = R * R - k * k
                if rem <= 0.0:
                    continue
                half = math.sqrt(rem)
                kmax = math.ceil(half) - 1
                N += 2 * kmax + 1
        if N * h ** n > vn * r ** n:
            raise ValueError(
                f"ball undercount violated at radius {r}: {N} cells x h^n exceeds m(B)"
            )


def make_ball_family(domain: Domain, center_stride: int = 1) -> BallFamily:
    """Balls centered at every center_stride-th cell center, dyadic radii.

    Radii follow default_radius_ladder. Construction asserts the undercount
    property N(B) h^n <= m(B) for every radius.
    """
    if not isinstance(center_stride, int) or center_stride < 1:
        raise ValueError(f"center_stride={center_stride} must be a positive integer")
    radii = default_radius_ladder(domain)
    _check_undercount(domain, radii)
    c = axis_centers(domain)
    idx = np.arange(0, domain.points_per_axis, center_stride)
    balls = []
    if domain.n == 1:
        centers = [(float(c[i]),) for i in idx]
    else:
        centers = [(float(c[i]), float(c[j])) for i in idx for j in idx]
    for ctr in centers:
        for r in radii:
            balls.append(Ball(center=ctr, radius=r))
    return BallFamily(domain=domain, balls=tuple(balls))


# -- corpus -----------------------------------------------------------------

_KINDS = ("indicator", "power", "gaussian", "steps")


@dataclass(frozen=True)
class Corpus:
    """Deterministic family of test functions on a domain.

    Members cycle through indicators, grid-truncated power functions,
    Gaussians, and random piecewise constants, all supported inside the
    half-size box [-L/2, L/2]^n so operator checks never see mass near the
    boundary. Regeneration with the same seed and domain is bit-identical.
    Each member's generating parameters are kept in `params` so a member
    can be rebuilt, perturbed, or transplanted onto a finer domain.
    """

    domain: Domain
    seed: int
    members: tuple
    labels: tuple
    params: tuple = ()


def _window(pts: np.ndarray, L: float) -> np.ndarray:
    half = L / 2.0
    inside = np.ones(pts.shape[0], dtype=bool)
    for d in range(pts.shape[1]):
        inside &= np.abs(pts[:, d]) <= half
    return inside


def member_from_params(domain: Domain, params: dict) -> GridFunction:
    """Build one corpus member from its parameter dict.

    The dict carries `kind` plus kind-specific scalars/tuples exactly as
    recorded by make_corpus; everything is windowed to [-L/2, L/2]^n.
    """
    pts = cell_centers(domain)
    L, h, n = domain.half_width, domain.spacing, domain.n
    kind = params["kind"]
    amp = float(params["amp"])
    if kind == "indicator":
        w, ctr = params["w"], params["ctr"]
        vals = np.full(pts.shape[0], amp)
        for d in range(n):
            vals *= np.abs(pts[:, d] - ctr[d]) <= w[d]
    elif kind == "power":
        ctr, beta = params["ctr"], float(params["beta"])
        dist = np.sqrt(np.sum((pts - np.asarray(ctr)) ** 2, axis=1))
        # truncated at the grid scale: cap the singularity at distance h/2
        vals = amp * np.maximum(dist, h / 2.0) ** (-beta)
    elif kind == "gaussian":
        ctr, width = params["ctr"], float(params["width"])
        d2 = np.sum((pts - np.asarray(ctr)) ** 2, axis=1)
        vals = amp * np.exp(-d2 / (2.0 * width * width))
    elif kind == "steps":
        levels = np.asarray(params["levels"], dtype=np.float64)
        nbin = 8 if n == 1 else 4
        if levels.shape != (nbin ** n,):
            raise ValueError(f"steps member needs {nbin ** n} levels, got {levels.shape}")
        edges = np.linspace(-L / 2, L / 2, nbin + 1)
        bins = np.zeros(pts.shape[0], dtype=np.int64)
        for d in range(n):
            b = np.clip(np.searchsorted(edges, pts[:, d], side="right") - 1, 0, nbin - 1)
            bins = bins * nbin + b
        vals = amp * levels[bins]
    else:
        raise ValueError(f"unknown member kind {kind!r}")
    vals = np.where(_window(pts, L), vals, 0.0)
    return GridFunction(domain, vals)


def make_corpus(domain: Domain, seed: int, size: int) -> Corpus:
    """Generate `size` members from the fixed four-family cycle."""
    if size < 1:
        raise ValueError(f"corpus size {size} must be at least 1")
    rng = np.random.default_rng(seed)
    L, n = domain.half_width, domain.n
    members, labels, all_params = [], [], []
    for j in range(size):
        kind = _KINDS[j % 4]
        amp = rng.uniform(0.5, 2.0)
        if kind == "indicator":
            w = rng.uniform(0.05 * L, 0.4 * L, size=n)
            ctr = tuple(rng.uniform(-L / 2 + w[d], L / 2 - w[d]) for d in range(n))
            p = {"kind": kind, "amp": amp, "w": tuple(w), "ctr": ctr}
        elif kind == "power":
            ctr = tuple(rng.uniform(-L / 4, L / 4, size=n))
            beta = rng.uniform(0.2, 0.8)
            p = {"kind": kind, "amp": amp, "ctr": ctr, "beta": beta}
        elif kind == "gaussian":
            ctr = tuple(rng.uniform(-L / 4, L / 4, size=n))
            width = rng.uniform(0.05 * L, 0.3 * L)
            p = {"kind": kind, "amp": amp, "ctr": ctr, "width": width}
        else:
            nbin = 8 if n == 1 else 4
            levels = rng.uniform(0.0, 2.0, size=nbin ** n)
            p = {"kind": kind, "amp": amp, "levels": tuple(levels)}
        members.append(member_from_params(domain, p))
        labels.append(f"{j}:{kind}")
        all_params.append(p)
    return Corpus(
        domain=domain,
        seed=int(seed),
        members=tuple(members),
        labels=tuple(labels),
        params=tuple(all_params),
    )


# -- serialization ----------------------------------------------------------

_HEADER_RE = re.compile(rb"^MFL1 n=(\d+) L=([^ ]+) G=(\d+)\n")


def save_grid_function(gf: GridFunction, path) -> None:
    """Write `MFL1 n=<n> L=<L> G=<G>` + raw little-endian float64 payload."""
    d = gf.domain
    header = f"MFL1 n={d.n} L={d.half_width!r} G={d.points_per_axis}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(gf.values.astype("<f8").tobytes())


def load_grid_function(path) -> GridFunction:
    """Read a grid function written by save_grid_function. Bit-exact."""
    with open(path, "rb") as fh:
        blob = fh.read()
    m = _HEADER_RE.match(blob)
    if m is None:
        raise ValueError(f"{path}: not an MFL1 file (bad header)")
    n, L, G = int(m.group(1)), float(m.group(2)), int(m.group(3))
    domain = make_domain(n, L, G)
    payload = blob[m.end():]
    expected = domain.size * 8
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    vals = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return GridFunction(domain, vals)
