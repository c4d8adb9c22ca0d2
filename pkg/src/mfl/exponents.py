"""Exponent bookkeeping for the multilinear fractional inequalities.

An ExponentSet bundles (m, n, alpha, s, p_1..p_m, kappa) plus the optional
outer exponent used by the product (Olsen) inequalities. Derived quantities
follow the scaling relations

    1/p = sum_i 1/p_i,
    1/q = 1/p - alpha/n                 (Lebesgue target),
    1/q = 1/p - alpha/(n (1 - kappa))   (Morrey target),

with explicit 'finite' / 'critical' / 'invalid' classification instead of
infinite sentinels. The dual-sum identity sum_i n/p_i' = m n - n/p is
recomputed on construction as a consistency check.

validate() audits an exponent set against a registered theorem's hypothesis
list; every hypothesis lands in either the satisfied or the violated bucket,
and violations carry a human-readable explanation. The convention
p' = p/(p-1) for 1 < p < infinity and p' = 1 at p = infinity is used
throughout, with s' = 1 when s = infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ExponentSet",
    "HypothesisVerdict",
    "derive",
    "validate",
    "kappa_chain",
    "theorem_ids",
    "theorem_summary",
]

_TOL = 1e-12


def _conjugate(p: float) -> float:
    """Hoelder conjugate; p = 1 -> inf, p = inf -> 1."""
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentSet:
    """Exponent data for one inequality instance.

    p_outer is the exponent of the extra factor in product inequalities and
    r_explicit an optional user-supplied product exponent (normally derived
    from the balance identity instead).
    """

    m: int
    n: int
    alpha: float
    s: float
    p_list: tuple
    kappa: float = 0.0
    p_outer: float | None = None
    r_explicit: float | None = None

    @property
    def s_prime(self) -> float:
        return _conjugate(self.s)

    @property
    def p(self) -> float:
        return 1.0 / sum(1.0 / pi for pi in self.p_list)

    @property
    def holder_dual_sum(self) -> float:
        """sum_i n / p_i'."""
        return sum(self.n / _conjugate(pi) for pi in self.p_list)

    def _q_from(self, inv: float):
        if inv > _TOL:
            return 1.0 / inv, "finite"
        if inv >= -_TOL:
            return None, "critical"
        return None, "invalid"

    @property
    def q_lebesgue(self):
        return self._q_from(1.0 / self.p - self.alpha / self.n)[0]

    @property
    def q_lebesgue_kind(self) -> str:
        return self._q_from(1.0 / self.p - self.alpha / self.n)[1]

    @property
    def q_adams(self):
        return self._q_from(1.0 / self.p - self.alpha / (self.n * (1.0 - self.kappa)))[0]

    @property
    def q_adams_kind(self) -> str:
        return self._q_from(1.0 / self.p - self.alpha / (self.n * (1.0 - self.kappa)))[1]

    @property
    def ell(self) -> int:
        """Number of slots sitting at the endpoint p_i = s'."""
        return sum(1 for pi in self.p_list if abs(pi - self.s_prime) <= _TOL)

    def _r_from(self, q):
        if self.p_outer is None or q is None:
            return None
        return 1.0 / (1.0 / self.p_outer + 1.0 / q)

    @property
    def r_lebesgue(self):
        return self._r_from(self.q_lebesgue)

    @property
    def r_adams(self):
        return self._r_from(self.q_adams)


def derive(m: int, n: int, alpha: float, s: float, p_list,
           kappa: float = 0.0, p_outer: float | None = None,
           r: float | None = None) -> ExponentSet:
    """Build an ExponentSet, validating ranges and the dual-sum identity."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m={m} must be a positive integer")
    if n not in (1, 2):
        raise ValueError(f"dimension n={n} not supported, expected 1 or 2")
    if not (0.0 < alpha < m * n):
        raise ValueError(f"alpha={alpha} not in (0, mn) = (0, {m * n})")
    if not (s >= 1.0):
        raise ValueError(f"s={s} must satisfy s >= 1 (inf allowed)")
    p_list = tuple(float(p) for p in p_list)
    if len(p_list) != m:
        raise ValueError(f"p_list has {len(p_list)} entries, expected m={m}")
    for pi in p_list:
        if not (pi > 0.0 and math.isfinite(pi)):
            raise ValueError(f"p_i={pi} must be positive and finite")
    if not (0.0 <= kappa < 1.0):
        raise ValueError(f"kappa={kappa} must lie in [0, 1)")
    if p_outer is not None and not (p_outer > 0.0 and math.isfinite(p_outer)):
        raise ValueError(f"p_outer={p_outer} must be positive and finite")
    if r is not None and not (r > 0.0 and math.isfinite(r)):
        raise ValueError(f"r={r} must be positive and finite")
    e = ExponentSet(m=m, n=n, alpha=float(alpha), s=float(s), p_list=p_list,
                    kappa=float(kappa), p_outer=p_outer, r_explicit=r)
    identity_gap = abs(e.holder_dual_sum - (m * n - n / e.p))
    if identity_gap > 1e-10 * m * n:
        raise ValueError(
            f"dual-sum identity violated by {identity_gap}; exponent data inconsistent"
        )
    return e


@dataclass(frozen=True)
class HypothesisVerdict:
    theorem_id: str
    satisfied: tuple
    violated: tuple  # of (name, explanation)

    @property
    def ok(self) -> bool:
        return not self.violated


# -- constraint predicates ---------------------------------------------------
# Each returns (ok, detail). `k` is the kernel tuple or None.


def _s_range(e, k):
    ok = e.s > 1.0
    return ok, f"s={e.s} must satisfy 1 < s <= inf"


def _alpha_range(e, k):
    ok = 0.0 < e.alpha < e.m * e.n
    return ok, f"alpha={e.alpha} must lie in (0, mn)=(0, {e.m * e.n})"


def _p_finite(e, k):
    ok = all(math.isfinite(pi) for pi in e.p_list)
    return ok, "every p_i must be finite"


def _p_ge_sprime(e, k):
    sp = e.s_prime
    ok = all(pi >= sp - _TOL for pi in e.p_list)
    return ok, f"every p_i must satisfy p_i >= s'={sp}, got {e.p_list}"


def _p_gt_sprime(e, k):
    sp = e.s_prime
    ok = all(pi > sp + _TOL for pi in e.p_list)
    return ok, f"every p_i must satisfy p_i > s'={sp} strictly, got {e.p_list}"


def _p_ge_one(e, k):
    ok = all(pi >= 1.0 - _TOL for pi in e.p_list)
    return ok, f"every p_i must satisfy p_i >= 1, got {e.p_list}"


def _p_gt_one(e, k):
    ok = all(pi > 1.0 + _TOL for pi in e.p_list)
    return ok, f"every p_i must satisfy p_i > 1 strictly, got {e.p_list}"


def _endpoint(e, k):
    ok = e.ell >= 1 and all(pi >= e.s_prime - _TOL for pi in e.p_list)
    return ok, f"min p_i must equal s'={e.s_prime}, got {e.p_list}"


def _window_strict(e, k):
    lo, hi = e.s_prime / e.m, e.n / e.alpha
    ok = lo + _TOL < e.p < hi - _TOL
    return ok, f"p={e.p} must lie in the open window (s'/m, n/alpha)=({lo}, {hi})"


def _window_weak(e, k):
    lo, hi = e.s_prime / e.m, e.n / e.alpha
    ok = lo - _TOL <= e.p < hi - _TOL
    return ok, f"p={e.p} must lie in [s'/m, n/alpha)=[{lo}, {hi})"


def _subcritical(e, k):
    ok = e.p < e.n / e.alpha - _TOL
    return ok, f"p={e.p} must be subcritical, p < n/alpha = {e.n / e.alpha}"


def _critical_sum(e, k):
    gap = abs(sum(1.0 / pi for pi in e.p_list) - e.alpha / e.n)
    ok = gap <= _TOL
    return ok, (
        f"criticality sum(1/p_i) = alpha/n required; off by {gap} "
        f"(sum={sum(1.0 / pi for pi in e.p_list)}, alpha/n={e.alpha / e.n})"
    )


def _kappa_zero(e, k):
    ok = abs(e.kappa) <= _TOL
    return ok, f"Lebesgue-scale statement needs kappa=0, got kappa={e.kappa}"


def _kappa_window(e, k):
    hi = 1.0 - e.alpha * e.p / e.n
    ok = _TOL < e.kappa < hi - _TOL
    return ok, f"kappa={e.kappa} must lie in (0, 1 - alpha p / n)=(0, {hi})"


def _kappa_critical(e, k):
    req = 1.0 - e.alpha * e.p / e.n
    ok = abs(e.kappa - req) <= _TOL and req > _TOL
    return ok, f"kappa must equal 1 - alpha p / n = {req}, got kappa={e.kappa}"


def _kappa_open(e, k):
    ok = _TOL < e.kappa < 1.0 - _TOL
    return ok, f"kappa={e.kappa} must lie in (0, 1)"


def _omega_one(e, k):
    if k is None:
        return True, "kernel conformance assumed (no kernels passed)"
    ok = all(kk.form == "constant" and abs(kk.c - 1.0) <= _TOL for kk in k)
    return ok, "every Omega_i must be identically 1 for the BMO statements"


def _balance_61(e, k):
    lam = e.n - e.alpha
    if len(e.p_list) != 2:
        return False, "kernel bilinear form needs exactly two exponents"
    gap = abs(1.0 / e.p_list[0] + 1.0 / e.p_list[1] + lam / e.n - 2.0)
    ok = gap <= _TOL
    return ok, f"balance 1/p + 1/q + lambda/n = 2 required; off by {gap}"


def _p_gt_sprime_61(e, k):
    sp = e.s_prime
    ok = all(sp + _TOL < pi and math.isfinite(pi) for pi in e.p_list)
    return ok, f"both exponents must lie in (s', inf), s'={sp}, got {e.p_list}"


def _lambda_range(e, k):
    lam = e.n - e.alpha
    ok = 0.0 < lam < e.n
    return ok, f"lambda = n - alpha = {lam} must lie in (0, n)=(0, {e.n})"


def _p_outer_range(e, k):
    if e.p_outer is None:
        return False, "outer exponent p (p_outer) not provided"
    ok = 1.0 - _TOL <= e.p_outer and math.isfinite(e.p_outer)
    return ok, f"outer exponent p={e.p_outer} must lie in [1, inf)"


def _q_positive_lebesgue(e, k):
    ok = e.q_lebesgue_kind == "finite"
    return ok, (
        f"target exponent 1/q = sum(1/p_i) - alpha/n must be positive, "
        f"status is {e.q_lebesgue_kind!r}"
    )


def _q_positive_adams(e, k):
    ok = e.q_adams_kind == "finite"
    return ok, (
        f"target exponent 1/q = sum(1/p_i) - alpha/(n(1-kappa)) must be "
        f"positive, status is {e.q_adams_kind!r}"
    )


def _kappa_sub_star(e, k):
    # implied by the proof: 0 < kappa < 1 - alpha p* / n, 1/p* = sum 1/p_i
    hi = 1.0 - e.alpha * e.p / e.n
    ok = _TOL < e.kappa < hi - _TOL
    return ok, f"kappa={e.kappa} must lie in (0, 1 - alpha p*/n)=(0, {hi})"


def _make_r_checks(flavor: str):
    def _r_balance(e, k):
        q = e.q_lebesgue if flavor == "lebesgue" else e.q_adams
        if e.r_explicit is None:
            return True, "r derived from the balance identity"
        if e.p_outer is None or q is None:
            return False, "r supplied but the balance identity is not derivable"
        gap = abs(1.0 / e.r_explicit - (1.0 / e.p_outer + 1.0 / q))
        ok = gap <= _TOL
        return ok, f"supplied r={e.r_explicit} violates the balance identity by {gap}"

    def _r_window(e, k):
        q = e.q_lebesgue if flavor == "lebesgue" else e.q_adams
        r = e.r_explicit
        if r is None:
            r = e._r_from(q)
        if r is None:
            return True, "r window not evaluable without a derivable r"
        bound = min(x for x in (e.p_outer, q) if x is not None) if (e.p_outer or q) else None
        if bound is None:
            return False, "r window needs p_outer or a finite q"
        ok = 0.0 < r < bound - _TOL
        return ok, f"need 0 < r < min(p, q) = {bound}, got r={r}"

    return _r_balance, _r_window


_RB_L, _RW_L = _make_r_checks("lebesgue")
_RB_A, _RW_A = _make_r_checks("adams")


def _embed_q_ge_one(e, k):
    ok = len(e.p_list) == 1 and e.p_list[0] >= 1.0 - _TOL
    return ok, f"embedding exponent q={e.p_list} must be a single value >= 1"


def _embed_p_gt_q(e, k):
    if e.p_outer is None or len(e.p_list) != 1:
        return False, "embedding needs p_outer > q"
    ok = e.p_outer > e.p_list[0] + _TOL and math.isfinite(e.p_outer)
    return ok, f"need q < p < inf, got q={e.p_list[0]}, p={e.p_outer}"


def _embed_kappa(e, k):
    if e.p_outer is None or len(e.p_list) != 1:
        return False, "embedding needs kappa = 1 - q/p"
    req = 1.0 - e.p_list[0] / e.p_outer
    ok = abs(e.kappa - req) <= _TOL
    return ok, f"kappa must equal 1 - q/p = {req}, got kappa={e.kappa}"


# -- theorem catalog ----------------------------------------------------------

_STRONG_LEBESGUE = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_gt_sprime", _p_gt_sprime), ("p_window", _window_strict), ("kappa_zero", _kappa_zero),
)
_WEAK_LEBESGUE = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint),
    ("p_window", _window_weak), ("kappa_zero", _kappa_zero),
)
_LLOGL_LEBESGUE = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint),
    ("subcritical", _subcritical), ("kappa_zero", _kappa_zero),
)
_STRONG_MORREY = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_gt_sprime", _p_gt_sprime), ("p_window", _window_strict),
    ("kappa_window", _kappa_window),
)
_WEAK_MORREY = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint),
    ("p_window", _window_weak), ("kappa_window", _kappa_window),
)
_LLOGL_MORREY = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint),
    ("subcritical", _subcritical), ("kappa_window", _kappa_window),
)
_OLSEN_COMMON_L = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_outer_range", _p_outer_range), ("q_positive", _q_positive_lebesgue),
    ("r_balance", _RB_L), ("r_window", _RW_L), ("kappa_zero", _kappa_zero),
)
_OLSEN_COMMON_A = (
    ("s_range", _s_range), ("alpha_range", _alpha_range), ("p_finite", _p_finite),
    ("p_outer_range", _p_outer_range), ("kappa_window", _kappa_sub_star),
    ("q_positive", _q_positive_adams), ("r_balance", _RB_A), ("r_window", _RW_A),
)

_CATALOG = {
    "2.1i": ("strong multilinear fractional integral bound on Lebesgue spaces",
             _STRONG_LEBESGUE),
    "2.1ii": ("weak-type endpoint for the multilinear fractional integral",
              _WEAK_LEBESGUE),
    "2.3": ("local L^p log L bound at the endpoint min p_i = s'",
            _LLOGL_LEBESGUE),
    "3.1i": ("strong maximal analogue on Lebesgue spaces", _STRONG_LEBESGUE),
    "3.1ii": ("weak maximal analogue at the endpoint", _WEAK_LEBESGUE),
    "3.1iii": ("local L^p log L maximal bound at the endpoint", _LLOGL_LEBESGUE),
    "3.2": ("critical-index sup bound for the maximal operator",
            (("s_range", _s_range), ("alpha_range", _alpha_range),
             ("p_finite", _p_finite), ("p_ge_sprime", _p_ge_sprime),
             ("critical_sum", _critical_sum), ("kappa_zero", _kappa_zero))),
    "3.3": ("critical-index BMO bound for the integral operator, Omega = 1",
            (("alpha_range", _alpha_range), ("p_finite", _p_finite),
             ("p_ge_one", _p_ge_one), ("critical_sum", _critical_sum),
             ("omega_equiv_one", _omega_one), ("kappa_zero", _kappa_zero))),
    "4.3i": ("strong multilinear fractional integral bound on Morrey spaces",
             _STRONG_MORREY),
    "4.3ii": ("weak Morrey endpoint for the multilinear fractional integral",
              _WEAK_MORREY),
    "4.4": ("local Morrey L^p log L bound at the endpoint", _LLOGL_MORREY),
    "5.1i": ("strong maximal analogue on Morrey spaces", _STRONG_MORREY),
    "5.1ii": ("weak maximal analogue on Morrey spaces", _WEAK_MORREY),
    "5.1iii": ("local Morrey L^p log L maximal bound", _LLOGL_MORREY),
    "5.2": ("critical Morrey sup bound for the maximal operator",
            (("s_range", _s_range), ("alpha_range", _alpha_range),
             ("p_finite", _p_finite), ("p_ge_sprime", _p_ge_sprime),
             ("kappa_critical", _kappa_critical), ("kappa_open", _kappa_open))),
    "5.3": ("critical Morrey BMO bound for the integral operator, Omega = 1",
            (("alpha_range", _alpha_range), ("p_finite", _p_finite),
             ("p_ge_one", _p_ge_one), ("kappa_critical", _kappa_critical),
             ("kappa_open", _kappa_open), ("omega_equiv_one", _omega_one))),
    "5.4": ("weak Lebesgue to Morrey embedding with explicit constant",
            (("q_ge_one", _embed_q_ge_one), ("p_gt_q", _embed_p_gt_q),
             ("kappa_match", _embed_kappa))),
    "5.5": ("critical sup bound from weak Lebesgue data",
            (("s_range", _s_range), ("alpha_range", _alpha_range),
             ("p_finite", _p_finite), ("p_gt_sprime", _p_gt_sprime),
             ("critical_sum", _critical_sum), ("kappa_zero", _kappa_zero))),
    "5.6": ("critical BMO bound from weak Lebesgue data, Omega = 1",
            (("alpha_range", _alpha_range), ("p_finite", _p_finite),
             ("p_gt_one", _p_gt_one), ("critical_sum", _critical_sum),
             ("omega_equiv_one", _omega_one), ("kappa_zero", _kappa_zero))),
    "6.1": ("bilinear form bound with homogeneous kernel",
            (("s_range", _s_range), ("lambda_range", _lambda_range),
             ("p_window", _p_gt_sprime_61), ("balance", _balance_61),
             ("kappa_zero", _kappa_zero))),
    "6.3i": ("strong Lebesgue product bound",
             _OLSEN_COMMON_L + (("p_gt_sprime", _p_gt_sprime),)),
    "6.3ii": ("weak Lebesgue product bound at the endpoint",
              _OLSEN_COMMON_L + (("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint))),
    "6.4": ("local L^p log L product bound at the endpoint",
            _OLSEN_COMMON_L + (("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint))),
    "6.6i": ("strong Morrey product bound",
             _OLSEN_COMMON_A + (("p_gt_sprime", _p_gt_sprime),)),
    "6.6ii": ("weak Morrey product bound at the endpoint",
              _OLSEN_COMMON_A + (("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint))),
    "6.7": ("local Morrey L^p log L product bound at the endpoint",
            _OLSEN_COMMON_A + (("p_ge_sprime", _p_ge_sprime), ("endpoint", _endpoint))),
}


def theorem_ids() -> tuple:
    return tuple(_CATALOG.keys())


def theorem_summary(theorem_id: str) -> str:
    if theorem_id not in _CATALOG:
        raise KeyError(f"unknown theorem_id {theorem_id!r}")
    return _CATALOG[theorem_id][0]


def validate(theorem_id: str, exps: ExponentSet, kernels=None) -> HypothesisVerdict:
    """Audit every hypothesis of the named theorem against an exponent set.

    kernels, when given, enables the kernel-dependent hypotheses (the BMO
    statements need Omega identically 1); without it those hypotheses are
    recorded as satisfied by assumption.
    """
    if theorem_id not in _CATALOG:
        raise KeyError(
            f"unknown theorem_id {theorem_id!r}; known ids: {', '.join(_CATALOG)}"
        )
    satisfied, violated = [], []
    for name, pred in _CATALOG[theorem_id][1]:
        ok, detail = pred(exps, kernels)
        if ok:
            satisfied.append(name)
        else:
            violated.append((name, detail))
    return HypothesisVerdict(
        theorem_id=theorem_id, satisfied=tuple(satisfied), violated=tuple(violated)
    )


def kappa_chain(p_star_list, p_list, alpha: float, n: int) -> float:
    """kappa from the weak-embedding chain: critical p*, chosen p_i < p_i*.

    Requires sum 1/p_i* = alpha/n, strict p_i < p_i* in every slot (kappa = 0
    is rejected), and a slot-independent kappa_i = 1 - p_i/p_i*. Returns the
    common kappa, which then equals 1 - alpha p / n.
    """
    p_star = tuple(float(p) for p in p_star_list)
    p_vec = tuple(float(p) for p in p_list)
    if len(p_star) != len(p_vec):
        raise ValueError("p_star_list and p_list must have the same length")
    crit_gap = abs(sum(1.0 / p for p in p_star) - alpha / n)
    if crit_gap > _TOL:
        raise ValueError(
            f"p* is not critical: sum(1/p_i*) differs from alpha/n by {crit_gap}"
        )
    kappas = []
    for pi, ps in zip(p_vec, p_star):
        if not pi < ps - _TOL:
            raise ValueError(
                f"need p_i < p_i* strictly (kappa = 0 rejected), got p_i={pi}, p_i*={ps}"
            )
        kappas.append(1.0 - pi / ps)
    spread = max(kappas) - min(kappas)
    if spread > _TOL:
        raise ValueError(
            f"per-slot kappa values {kappas} disagree by {spread}; "
            "a single kappa must serve every slot"
        )
    return kappas[0]
