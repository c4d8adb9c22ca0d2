"""Theorem checkers: LHS/RHS functionals, empirical constants, searches.

Every registered inequality is evaluated as a pair of numbers: lhs is the
norm on the left of the stated inequality, rhs_without_constant is the
product of norms on the right with no multiplicative constant attached.
The ratio lhs/rhs is what an implicit-constant statement actually pins
down numerically: it must stay bounded as the corpus, the grid, and the
parameters vary. Empirical constants are the observed suprema of these
ratios, and refinement studies recompute the argmax configuration on a
doubled grid to see whether the ratio has stabilized.

Hypothesis violations refuse loudly (HypothesisError) before any
computation; silent projection onto the nearest valid exponent set would
make refusal tests meaningless.

Supports are required to live in the inner box [-L/2, L/2]^n, the corpus
window, so truncation of the operator tails stays a controlled error.
The Lerner-lemma checks are exempt: both sides are local averages on the
same grid, so full-width inputs (constants in particular) are legitimate
and map to ratio exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentSet, derive, validate
from .grid import (
    Ball,
    BallFamily,
    Domain,
    GridFunction,
    cell_centers,
    make_ball_family,
    make_corpus,
    make_domain,
    member_from_params,
    unit_ball_volume,
)
from .hls import hls_form, olsen_product
from .norms import (
    bmo_norm,
    llogl_morrey_norm,
    lp_norm,
    luxemburg_norm,
    morrey_norm,
    weak_lp_norm,
    weak_morrey_norm,
)
from .operators import (
    OperatorSpec,
    eval_fractional_integral,
    eval_fractional_maximal,
    eval_lerner_maximal,
    eval_power_maximal,
)
from .kernel import sphere_norm

__all__ = [
    "HypothesisError",
    "CheckResult",
    "ConstantEstimate",
    "check",
    "estimate_constant",
    "adversarial_search",
    "lerner_maximal_checks",
    "exact_inequality_suite",
    "pointwise_bound_ratio",
]


class HypothesisError(ValueError):
    """A theorem's exponent hypotheses are violated; nothing was computed."""

    def __init__(self, theorem_id: str, violated):
        self.theorem_id = theorem_id
        self.violated = tuple(violated)
        names = "; ".join(f"{name}: {detail}" for name, detail in self.violated)
        super().__init__(f"hypotheses of {theorem_id} violated -- {names}")


@dataclass(frozen=True)
class CheckResult:
    """One inequality instance: lhs vs constant-free rhs."""

    theorem_id: str
    exps: ExponentSet
    function_ids: tuple
    lhs: float
    rhs_without_constant: float
    ratio: float
    h: float
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ConstantEstimate:
    """Empirical constant: the max ratio over a corpus, plus stability data."""

    theorem_id: str
    exps: ExponentSet
    c_emp: float
    argmax_ids: tuple
    refinement_ratios: tuple
    notes: dict = field(default_factory=dict)


# theorem groups sharing one evaluation recipe
_INTEGRAL_STRONG = {"2.1i"}
_INTEGRAL_WEAK = {"2.1ii"}
_INTEGRAL_BALL_LLOGL = {"2.3"}
_MAXIMAL_STRONG = {"3.1i"}
_MAXIMAL_WEAK = {"3.1ii"}
_MAXIMAL_BALL_LLOGL = {"3.1iii"}
_CRITICAL_SUP = {"3.2", "5.2", "5.5"}
_BMO = {"3.3", "5.3", "5.6"}
_INTEGRAL_MORREY = {"4.3i"}
_INTEGRAL_MORREY_WEAK = {"4.3ii"}
_INTEGRAL_MORREY_LLOGL = {"4.4"}
_MAXIMAL_MORREY = {"5.1i"}
_MAXIMAL_MORREY_WEAK = {"5.1ii"}
_MAXIMAL_MORREY_LLOGL = {"5.1iii"}
_EMBEDDING = {"5.4"}
_HLS_FORM = {"6.1"}
_OLSEN_LEBESGUE = {"6.3i", "6.3ii", "6.4"}
_OLSEN_MORREY = {"6.6i", "6.6ii", "6.7"}

_NEEDS_OUTER = _OLSEN_LEBESGUE | _OLSEN_MORREY


def _default_family(domain: Domain) -> BallFamily:
    stride = max(1, domain.points_per_axis // 64)
    return make_ball_family(domain, center_stride=stride)


def _default_ball(domain: Domain) -> Ball:
    return Ball(center=(0.0,) * domain.n, radius=domain.half_width / 2.0)


def _assert_inner_support(f: GridFunction, domain: Domain) -> None:
    nz = np.flatnonzero(f.values)
    if nz.size == 0:
        return
    pts = cell_centers(domain)[nz]
    limit = domain.half_width / 2.0 * (1.0 + 1e-9)
    if float(np.max(np.abs(pts))) > limit:
        raise ValueError(
            "input support escapes the inner box [-L/2, L/2]^n; "
            "operator tails would not be controlled"
        )


def _integral_output(exps, fs, kernels) -> GridFunction:
    spec = OperatorSpec(
        kind="fractional_integral", m=exps.m, alpha=exps.alpha,
        kernels=tuple(kernels) if kernels else (),
    )
    return eval_fractional_integral(spec, fs).output


def _maximal_output(exps, fs, kernels, ladder) -> GridFunction:
    spec = OperatorSpec(
        kind="fractional_maximal_centered", m=exps.m, alpha=exps.alpha,
        kernels=tuple(kernels) if kernels else (),
        ladder=tuple(ladder) if ladder else (),
    )
    return eval_fractional_maximal(spec, fs).output


def _mixed_ball_rhs(exps, fs, ball) -> float:
    # first ell slots sit at the endpoint p_i = s' and carry the L log L norm
    rhs = 1.0
    for f, p in zip(fs, exps.p_list):
        if abs(p - exps.s_prime) <= 1e-12:
            rhs *= luxemburg_norm(f, p, ball)
        else:
            rhs *= lp_norm(f, p, ball)
    return rhs


def _mixed_morrey_rhs(exps, fs, family) -> float:
    rhs = 1.0
    for f, p in zip(fs, exps.p_list):
        if abs(p - exps.s_prime) <= 1e-12:
            rhs *= llogl_morrey_norm(f, p, exps.kappa, family)
        else:
            rhs *= morrey_norm(f, p, exps.kappa, family)
    return rhs


def _chain_constant(exps, kernels) -> float:
    """(n v_n)^{-m/s} prod ||Omega_i||_{L^s}, the critical-case chain bound."""
    if math.isinf(exps.s):
        base = 1.0
    else:
        base = (exps.n * unit_ball_volume(exps.n)) ** (-exps.m / exps.s)
    prod = 1.0
    for k in kernels:
        prod *= sphere_norm(k, exps.s)
    return base * prod


def check(
    theorem_id: str,
    exps: ExponentSet,
    fs,
    *,
    f_outer: GridFunction | None = None,
    kernels=None,
    family: BallFamily | None = None,
    ball: Ball | None = None,
    ladder=None,
    function_ids=(),
) -> CheckResult:
    """Evaluate one registered inequality instance on concrete functions.

    fs are the operator inputs (m of them); f_outer is the extra factor for
    the product (Olsen) theorems. Raises HypothesisError when the exponent
    hypotheses fail, before touching any function data.
    """
    verdict = validate(theorem_id, exps, kernels=kernels)
    if not verdict.ok:
        raise HypothesisError(theorem_id, verdict.violated)
    fs = list(fs)
    if len(fs) != exps.m:
        raise ValueError(f"got {len(fs)} inputs for m={exps.m}")
    domain = fs[0].domain
    for f in fs:
        if f.domain != domain:
            raise ValueError("all inputs must share one domain")
    if domain.n != exps.n:
        raise ValueError(f"domain dimension {domain.n} != exponent dimension {exps.n}")
    for f in fs:
        _assert_inner_support(f, domain)
    if theorem_id in _NEEDS_OUTER:
        if f_outer is None:
            raise ValueError(f"{theorem_id} needs the outer factor f_outer")
        if f_outer.domain != domain:
            raise ValueError("f_outer must share the inputs' domain")
        _assert_inner_support(f_outer, domain)
    kernels_t = tuple(kernels) if kernels else ()
    notes: dict = {}

    if theorem_id in _INTEGRAL_STRONG or theorem_id in _INTEGRAL_WEAK:
        T = _integral_output(exps, fs, kernels_t)
        q = exps.q_lebesgue
        lhs = lp_norm(T, q) if theorem_id in _INTEGRAL_STRONG else weak_lp_norm(T, q)
        rhs = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        notes["q"] = q
    elif theorem_id in _INTEGRAL_BALL_LLOGL or theorem_id in _MAXIMAL_BALL_LLOGL:
        ball = ball or _default_ball(domain)
        out = (
            _integral_output(exps, fs, kernels_t)
            if theorem_id in _INTEGRAL_BALL_LLOGL
            else _maximal_output(exps, fs, kernels_t, ladder)
        )
        q = exps.q_lebesgue
        lhs = lp_norm(out, q, ball)
        rhs = _mixed_ball_rhs(exps, fs, ball)
        notes["q"] = q
        notes["ball_measure"] = ball.measure
    elif theorem_id in _MAXIMAL_STRONG or theorem_id in _MAXIMAL_WEAK:
        M = _maximal_output(exps, fs, kernels_t, ladder)
        q = exps.q_lebesgue
        lhs = lp_norm(M, q) if theorem_id in _MAXIMAL_STRONG else weak_lp_norm(M, q)
        rhs = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        notes["q"] = q
    elif theorem_id in _CRITICAL_SUP:
        M = _maximal_output(exps, fs, kernels_t, ladder)
        lhs = float(np.max(M.values))
        if theorem_id == "3.2":
            rhs = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        elif theorem_id == "5.2":
            fam = family or _default_family(domain)
            rhs = math.prod(
                morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
            )
        else:  # 5.5
            rhs = math.prod(weak_lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        chain = _chain_constant(exps, kernels_t) if kernels_t else 1.0
        notes["chain_constant"] = chain
        notes["q"] = math.inf
    elif theorem_id in _BMO:
        T = _integral_output(exps, fs, kernels_t)
        fam = family or _default_family(domain)
        lhs = bmo_norm(T, fam)
        if theorem_id == "3.3":
            rhs = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        elif theorem_id == "5.3":
            rhs = math.prod(
                morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
            )
        else:  # 5.6
            rhs = math.prod(weak_lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        notes["q"] = math.inf
    elif theorem_id in _INTEGRAL_MORREY or theorem_id in _INTEGRAL_MORREY_WEAK:
        T = _integral_output(exps, fs, kernels_t)
        fam = family or _default_family(domain)
        q = exps.q_adams
        lhs = (
            morrey_norm(T, q, exps.kappa, fam)
            if theorem_id in _INTEGRAL_MORREY
            else weak_morrey_norm(T, q, exps.kappa, fam)
        )
        rhs = math.prod(
            morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
        )
        notes["q"] = q
    elif theorem_id in _INTEGRAL_MORREY_LLOGL:
        T = _integral_output(exps, fs, kernels_t)
        fam = family or _default_family(domain)
        q = exps.q_adams
        lhs = morrey_norm(T, q, exps.kappa, fam)
        rhs = _mixed_morrey_rhs(exps, fs, fam)
        notes["q"] = q
    elif theorem_id in _MAXIMAL_MORREY or theorem_id in _MAXIMAL_MORREY_WEAK:
        M = _maximal_output(exps, fs, kernels_t, ladder)
        fam = family or _default_family(domain)
        q = exps.q_adams
        lhs = (
            morrey_norm(M, q, exps.kappa, fam)
            if theorem_id in _MAXIMAL_MORREY
            else weak_morrey_norm(M, q, exps.kappa, fam)
        )
        rhs = math.prod(
            morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
        )
        notes["q"] = q
    elif theorem_id in _MAXIMAL_MORREY_LLOGL:
        M = _maximal_output(exps, fs, kernels_t, ladder)
        fam = family or _default_family(domain)
        q = exps.q_adams
        lhs = morrey_norm(M, q, exps.kappa, fam)
        rhs = _mixed_morrey_rhs(exps, fs, fam)
        notes["q"] = q
    elif theorem_id in _EMBEDDING:
        # encoded as p_list = (q,), p_outer = p, kappa = 1 - q/p
        f = fs[0]
        fam = family or _default_family(domain)
        q = exps.p_list[0]
        lhs = morrey_norm(f, q, exps.kappa, fam)
        rhs = weak_lp_norm(f, exps.p_outer)
        notes["explicit_constant"] = (exps.p_outer / (exps.p_outer - q)) ** (1.0 / q)
        notes["q"] = q
    elif theorem_id in _HLS_FORM:
        lam = exps.n - exps.alpha
        kern = kernels_t[0] if kernels_t else None
        lhs = abs(hls_form(fs[0], fs[1], lam, kern))
        rhs = lp_norm(fs[0], exps.p_list[0]) * lp_norm(fs[1], exps.p_list[1])
        notes["lambda"] = lam
        notes["q"] = math.inf
    elif theorem_id in _OLSEN_LEBESGUE:
        T = _integral_output(exps, fs, kernels_t)
        product = GridFunction(domain, f_outer.values * T.values)
        r = exps.r_lebesgue
        if theorem_id == "6.3i":
            lhs = lp_norm(product, r)
            rhs = lp_norm(f_outer, exps.p_outer) * math.prod(
                lp_norm(f, p) for f, p in zip(fs, exps.p_list)
            )
        elif theorem_id == "6.3ii":
            lhs = weak_lp_norm(product, r)
            rhs = lp_norm(f_outer, exps.p_outer) * math.prod(
                lp_norm(f, p) for f, p in zip(fs, exps.p_list)
            )
        else:  # 6.4, ball-restricted with the mixed L log L right side
            ball = ball or _default_ball(domain)
            lhs = lp_norm(product, r, ball)
            rhs = lp_norm(f_outer, exps.p_outer, ball) * _mixed_ball_rhs(exps, fs, ball)
            notes["ball_measure"] = ball.measure
        notes["q"] = r
    elif theorem_id in _OLSEN_MORREY:
        fam = family or _default_family(domain)
        res = olsen_product(theorem_id, f_outer, fs, exps, kernels=kernels_t or None, family=fam)
        lhs, rhs = res.lhs, res.rhs
        notes["q"] = res.r
    else:
        raise KeyError(f"check dispatch is missing theorem id {theorem_id!r}")

    if rhs > 0.0:
        ratio = lhs / rhs
    else:
        ratio = 0.0
    return CheckResult(
        theorem_id=theorem_id,
        exps=exps,
        function_ids=tuple(function_ids),
        lhs=float(lhs),
        rhs_without_constant=float(rhs),
        ratio=float(ratio),
        h=domain.spacing,
        notes=notes,
    )


def _member_tuple(corpus, j: int, m: int, with_outer: bool):
    size = len(corpus.members)
    fs = [corpus.members[(j + i) % size] for i in range(m)]
    ids = [corpus.labels[(j + i) % size] for i in range(m)]
    outer = None
    if with_outer:
        outer = corpus.members[(j + m) % size]
        ids.append(corpus.labels[(j + m) % size])
    return fs, outer, tuple(ids)


def estimate_constant(
    theorem_id: str,
    exps: ExponentSet,
    corpus,
    *,
    kernels=None,
    family: BallFamily | None = None,
    ball: Ball | None = None,
    ladder=None,
    refine: bool = True,
) -> ConstantEstimate:
    """Max ratio over corpus tuples, with an optional doubled-grid replay.

    Member j supplies slots (j, j+1, .., j+m-1 mod size), plus slot j+m as
    the outer factor for product theorems. The refinement step rebuilds the
    argmax members from their generating parameters on a grid with twice
    the resolution and recomputes the single ratio there.
    """
    with_outer = theorem_id in _NEEDS_OUTER
    best = None
    best_j = -1
    size = len(corpus.members)
    for j in range(size):
        fs, outer, ids = _member_tuple(corpus, j, exps.m, with_outer)
        res = check(
            theorem_id, exps, fs, f_outer=outer, kernels=kernels,
            family=family, ball=ball, ladder=ladder, function_ids=ids,
        )
        if best is None or res.ratio > best.ratio:
            best = res
            best_j = j
    refinement = (best.ratio,)
    if refine and best.ratio > 0.0 and corpus.params:
        d = corpus.domain
        fine = make_domain(d.n, d.half_width, 2 * d.points_per_axis)
        idxs = [(best_j + i) % size for i in range(exps.m)]
        fs2 = [member_from_params(fine, corpus.params[i]) for i in idxs]
        outer2 = None
        if with_outer:
            outer2 = member_from_params(fine, corpus.params[(best_j + exps.m) % size])
        fam2 = _default_family(fine) if family is not None else None
        ball2 = ball
        res2 = check(
            theorem_id, exps, fs2, f_outer=outer2, kernels=kernels,
            family=fam2, ball=ball2, ladder=None, function_ids=best.function_ids,
        )
        refinement = (best.ratio, res2.ratio)
    return ConstantEstimate(
        theorem_id=theorem_id,
        exps=exps,
        c_emp=best.ratio,
        argmax_ids=best.function_ids,
        refinement_ratios=refinement,
        notes=dict(best.notes),
    )


_PERTURBABLE = {
    "indicator": ("amp", "w", "ctr"),
    "power": ("amp", "ctr", "beta"),
    "gaussian": ("amp", "ctr", "width"),
    "steps": ("amp",),
}


def _perturb_params(p: dict, rng, L: float) -> dict:
    q = dict(p)
    keys = _PERTURBABLE[p["kind"]]
    key = keys[rng.integers(0, len(keys))]
    bump = math.exp(rng.normal(0.0, 0.25))
    if key == "amp":
        q["amp"] = max(p["amp"] * bump, 1e-6)
    elif key == "beta":
        q["beta"] = float(min(max(p["beta"] * bump, 0.05), 0.85))
    elif key == "width":
        q["width"] = float(min(max(p["width"] * bump, 0.01 * L), 0.45 * L))
    elif key == "w":
        q["w"] = tuple(float(min(max(v * bump, 0.01 * L), 0.45 * L)) for v in p["w"])
    else:  # ctr
        shift = rng.normal(0.0, 0.05 * L, size=len(p["ctr"]))
        q["ctr"] = tuple(
            float(min(max(c + s, -0.45 * L), 0.45 * L))
            for c, s in zip(p["ctr"], shift)
        )
    return q


def adversarial_search(
    theorem_id: str,
    exps: ExponentSet,
    seed: int,
    budget: int,
    *,
    domain: Domain | None = None,
    kernels=None,
    family: BallFamily | None = None,
    ball: Ball | None = None,
    ladder=None,
) -> ConstantEstimate:
    """Hill-climb the ratio over member parameters; deterministic under seed.

    Starts from the argmax of a 16-member seed corpus, then proposes
    single-parameter perturbations (accept on improvement) until the eval
    budget is spent.
    """
    if budget < 1:
        raise ValueError(f"budget={budget} must be at least 1")
    if domain is None:
        domain = make_domain(exps.n, 4.0, 256)
    corpus = make_corpus(domain, seed, 16)
    with_outer = theorem_id in _NEEDS_OUTER
    base = estimate_constant(
        theorem_id, exps, corpus, kernels=kernels, family=family,
        ball=ball, ladder=ladder, refine=False,
    )
    size = len(corpus.members)
    best_j = next(
        j for j in range(size)
        if _member_tuple(corpus, j, exps.m, with_outer)[2] == base.argmax_ids
    )
    count = exps.m + (1 if with_outer else 0)
    params = [dict(corpus.params[(best_j + i) % size]) for i in range(count)]
    best_ratio = base.c_emp
    rng = np.random.default_rng(seed)
    L = domain.half_width
    evals = 0
    while evals < budget:
        slot = int(rng.integers(0, count))
        proposal = [dict(p) for p in params]
        proposal[slot] = _perturb_params(params[slot], rng, L)
        members = [member_from_params(domain, p) for p in proposal]
        fs = members[: exps.m]
        outer = members[exps.m] if with_outer else None
        res = check(
            theorem_id, exps, fs, f_outer=outer, kernels=kernels,
            family=family, ball=ball, ladder=ladder,
        )
        evals += 1
        if res.ratio > best_ratio:
            best_ratio = res.ratio
            params = proposal
    ids = tuple(f"adv:{i}:{p['kind']}" for i, p in enumerate(params))
    return ConstantEstimate(
        theorem_id=theorem_id,
        exps=exps,
        c_emp=best_ratio,
        argmax_ids=ids,
        refinement_ratios=(base.c_emp, best_ratio),
        notes={"budget": float(budget), "seed": float(seed)},
    )


def pointwise_bound_ratio(exps: ExponentSet, fs, *, kernels=None, family=None, ladder=None) -> float:
    """sup over the grid of T(f vec) / [M_{s'}(f vec)^{p/q} (prod norms)^{1-p/q}].

    The Lebesgue variant (kappa = 0) uses q from 1/q = 1/p - alpha/n and
    global L^{p_i} norms; kappa > 0 switches to the Morrey q and norms.
    """
    fs = list(fs)
    domain = fs[0].domain
    T = _integral_output(exps, fs, tuple(kernels) if kernels else ())
    Ms = eval_power_maximal(fs, exps.s_prime, ladder)
    if exps.kappa > 0.0:
        q = exps.q_adams
        fam = family or _default_family(domain)
        prod = math.prod(
            morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
        )
    else:
        q = exps.q_lebesgue
        prod = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
    theta = exps.p / q
    denom = Ms.values ** theta * prod ** (1.0 - theta)
    mask = denom > 0.0
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(T.values[mask]) / denom[mask]))


_LERNER_IDS = ("2.2s", "2.2w", "4.1", "4.2s", "4.2w")


def lerner_maximal_checks(exps: ExponentSet, corpus, family: BallFamily | None = None, ladder=None) -> list:
    """Bound checks for the plain multilinear maximal operator M.

    Rows: 2.2s/2.2w (Lebesgue strong/weak), 4.1 (linear Morrey, slot 1),
    4.2s/4.2w (Morrey strong/weak). No support restriction applies; see the
    module docstring.
    """
    domain = corpus.domain
    fam = family or _default_family(domain)
    rows = []
    size = len(corpus.members)
    for j in range(size):
        fs, _, ids = _member_tuple(corpus, j, exps.m, False)
        M = eval_lerner_maximal(fs, ladder)
        rhs_lp = math.prod(lp_norm(f, p) for f, p in zip(fs, exps.p_list))
        rhs_mo = math.prod(
            morrey_norm(f, p, exps.kappa, fam) for f, p in zip(fs, exps.p_list)
        )
        single = eval_lerner_maximal([fs[0]], ladder)
        p0 = exps.p_list[0]
        entries = (
            ("2.2s", lp_norm(M, exps.p), rhs_lp),
            ("2.2w", weak_lp_norm(M, exps.p), rhs_lp),
            ("4.1", morrey_norm(single, p0, exps.kappa, fam),
             morrey_norm(fs[0], p0, exps.kappa, fam)),
            ("4.2s", morrey_norm(M, exps.p, exps.kappa, fam), rhs_mo),
            ("4.2w", weak_morrey_norm(M, exps.p, exps.kappa, fam), rhs_mo),
        )
        for tid, lhs, rhs in entries:
            ratio = lhs / rhs if rhs > 0.0 else 0.0
            rows.append(CheckResult(
                theorem_id=tid, exps=exps, function_ids=ids,
                lhs=float(lhs), rhs_without_constant=float(rhs),
                ratio=float(ratio), h=domain.spacing, notes={},
            ))
    return rows


def exact_inequality_suite(corpus, family: BallFamily, exponent_sets) -> list:
    """Zero-tolerance discrete inequalities over corpus pairs.

    Each row is a dict with name, lhs, bound (constant already applied),
    and ok = lhs <= bound within 1e-10 relative slack. These are the
    load-bearing exact facts: Hoelder on both scales, the weak Hoelder
    constant, Morrey inclusions, and the weak-to-Morrey embedding.
    """
    rows = []
    size = len(corpus.members)
    slack = 1e-10

    def push(name, pair_id, lhs, bound):
        rows.append({
            "name": name,
            "pair": pair_id,
            "lhs": float(lhs),
            "bound": float(bound),
            "ok": bool(lhs <= bound * (1.0 + slack) + 1e-300),
        })

    for es in exponent_sets:
        p, q = es.p_list[0], es.p_list[1] if es.m >= 2 else 2.0 * es.p_list[0]
        r = 1.0 / (1.0 / p + 1.0 / q)
        kap = es.kappa if es.kappa > 0.0 else 0.3
        K_weak = (p / r) ** (1.0 / p) * (q / r) ** (1.0 / q)
        # matched Morrey pair for the inclusion: (1-k1)/q1 = (1-kap)/p
        q1 = 0.75 * p
        k1 = 1.0 - (1.0 - kap) * q1 / p
        # weak-to-Morrey embedding at q_e < p_e
        q_e, p_e = p, 2.0 * p
        K_cpq = (p_e / (p_e - q_e)) ** (1.0 / q_e)
        kap_e = 1.0 - q_e / p_e
        for j in range(size):
            F = corpus.members[j]
            Gm = corpus.members[(j + 1) % size]
            pair = f"{corpus.labels[j]}|{corpus.labels[(j + 1) % size]}"
            FG = GridFunction(corpus.domain, F.values * Gm.values)
            push("holder_lebesgue", pair,
                 lp_norm(FG, r), lp_norm(F, p) * lp_norm(Gm, q))
            push("holder_weak", pair,
                 weak_lp_norm(FG, r),
                 K_weak * lp_norm(F, p) * weak_lp_norm(Gm, q))
            push("holder_morrey", pair,
                 morrey_norm(FG, r, kap, family),
                 morrey_norm(F, p, kap, family) * morrey_norm(Gm, q, kap, family))
            push("holder_weak_morrey", pair,
                 weak_morrey_norm(FG, r, kap, family),
                 K_weak * morrey_norm(F, p, kap, family)
                 * weak_morrey_norm(Gm, q, kap, family))
            push("inclusion_strong", pair,
                 morrey_norm(F, q1, k1, family), morrey_norm(F, p, kap, family))
            push("inclusion_weak", pair,
                 weak_morrey_norm(F, p, kap, family), morrey_norm(F, p, kap, family))
            push("cpq", pair,
                 morrey_norm(F, q_e, kap_e, family), K_cpq * weak_lp_norm(F, p_e))
    return rows
