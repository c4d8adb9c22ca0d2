import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfl.exponents import (
    derive,
    kappa_chain,
    theorem_ids,
    theorem_summary,
    validate,
)
from mfl.kernel import constant_kernel, sign_kernel

INF = math.inf

ALL_IDS = (
    "2.1i", "2.1ii", "2.3", "3.1i", "3.1ii", "3.1iii", "3.2", "3.3",
    "4.3i", "4.3ii", "4.4", "5.1i", "5.1ii", "5.1iii", "5.2", "5.3",
    "5.4", "5.5", "5.6", "6.1", "6.3i", "6.3ii", "6.4", "6.6i", "6.6ii", "6.7",
)

# one hypothesis-satisfying exponent set per theorem (n = 1, alpha = 1/2)
VALID = {
    "2.1i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3)),
    "2.1ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2)),
    "2.3": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2)),
    "3.1i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3)),
    "3.1ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2)),
    "3.1iii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2)),
    "3.2": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(4, 4)),
    "3.3": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(4, 4)),
    "4.3i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=0.2),
    "4.3ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2),
    "4.4": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2),
    "5.1i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=0.2),
    "5.1ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2),
    "5.1iii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2),
    "5.2": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=0.25),
    "5.3": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=0.25),
    "5.4": dict(m=1, n=1, alpha=0.5, s=INF, p_list=(2,), kappa=0.5, p_outer=4.0),
    "5.5": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(4, 4)),
    "5.6": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(4, 4)),
    "6.1": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(4 / 3, 4 / 3)),
    "6.3i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), p_outer=2.0),
    "6.3ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), p_outer=2.0),
    "6.4": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), p_outer=2.0),
    "6.6i": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=0.2, p_outer=2.0),
    "6.6ii": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2, p_outer=2.0),
    "6.7": dict(m=2, n=1, alpha=0.5, s=INF, p_list=(1, 2), kappa=0.2, p_outer=2.0),
}


def test_catalog_ids_complete():
    assert theorem_ids() == ALL_IDS
    for tid in ALL_IDS:
        assert theorem_summary(tid)
    with pytest.raises(KeyError):
        theorem_summary("9.9")


def test_derived_targets():
    e = derive(2, 1, 0.5, INF, (3, 3))
    assert e.p == pytest.approx(1.5, rel=1e-15)
    assert e.q_lebesgue == pytest.approx(6.0, rel=1e-13)
    assert e.q_lebesgue_kind == "finite"
    e2 = derive(2, 1, 0.5, INF, (3, 3), kappa=0.2)
    assert e2.q_adams == pytest.approx(24.0, rel=1e-12)


def test_target_kinds():
    crit = derive(2, 1, 0.5, INF, (4, 4))
    assert crit.q_lebesgue is None and crit.q_lebesgue_kind == "critical"
    bad = derive(2, 1, 0.5, INF, (8, 8))
    assert bad.q_lebesgue is None and bad.q_lebesgue_kind == "invalid"


def test_conjugates_and_endpoint_count():
    e = derive(2, 1, 0.5, 4.0, (4 / 3, 2))
    assert e.s_prime == pytest.approx(4 / 3, rel=1e-15)
    assert e.ell == 1
    assert derive(2, 1, 0.5, INF, (1, 2)).ell == 1
    assert derive(2, 1, 0.5, INF, (1, 1)).ell == 2
    assert derive(2, 1, 0.5, INF, (3, 3)).ell == 0


@given(st.floats(min_value=1.05, max_value=20.0),
       st.floats(min_value=1.05, max_value=20.0))
def test_dual_sum_identity(p1, p2):
    e = derive(2, 1, 0.4, 2.0, (p1, p2))
    assert math.isclose(e.holder_dual_sum, 2 * 1 - 1 / e.p, rel_tol=1e-10)


def test_outer_product_exponent():
    e = derive(2, 1, 0.5, INF, (3, 3), p_outer=2.0)
    assert e.r_lebesgue == pytest.approx(1.5, rel=1e-13)
    e2 = derive(2, 1, 0.5, INF, (3, 3), kappa=0.2, p_outer=2.0)
    assert e2.r_adams == pytest.approx(1.0 / (0.5 + 1.0 / 24.0), rel=1e-12)
    assert derive(2, 1, 0.5, INF, (3, 3)).r_lebesgue is None


@pytest.mark.parametrize("kwargs", [
    dict(m=0, n=1, alpha=0.5, s=INF, p_list=()),
    dict(m=2, n=3, alpha=0.5, s=INF, p_list=(3, 3)),
    dict(m=2, n=1, alpha=0.0, s=INF, p_list=(3, 3)),
    dict(m=2, n=1, alpha=2.0, s=INF, p_list=(3, 3)),
    dict(m=2, n=1, alpha=0.5, s=0.5, p_list=(3, 3)),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3,)),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, -1)),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, INF)),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=1.0),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), kappa=-0.1),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), p_outer=0.0),
    dict(m=2, n=1, alpha=0.5, s=INF, p_list=(3, 3), r=-2.0),
])
def test_derive_rejects(kwargs):
    with pytest.raises(ValueError):
        derive(**kwargs)


@pytest.mark.parametrize("tid", ALL_IDS)
def test_validate_accepts_catalog_row(tid):
    e = derive(**VALID[tid])
    v = validate(tid, e)
    assert v.ok, f"{tid}: unexpected violations {v.violated}"
    assert v.theorem_id == tid
    assert len(v.satisfied) >= 3 or tid == "5.4"


def _violation_names(tid, **overrides):
    kwargs = dict(VALID[tid])
    kwargs.update(overrides)
    v = validate(tid, derive(**kwargs))
    return [name for name, _ in v.violated]


def test_validate_flags_endpoint_gap():
    assert "p_gt_sprime" in _violation_names("2.1i", p_list=(1, 2))
    assert "endpoint" in _violation_names("2.1ii", p_list=(2, 2))
    assert "endpoint" in _violation_names("2.3", p_list=(2, 3))


def test_validate_flags_window():
    # p above n/alpha: supercritical
    names = _violation_names("2.1i", p_list=(8, 8))
    assert "p_window" in names
    names = _violation_names("3.1ii", p_list=(1, 1))
    # p = 1/2 = s'/m sits on the closed edge, allowed for the weak form
    assert "p_window" not in names


def test_validate_flags_criticality():
    assert "critical_sum" in _violation_names("3.2", p_list=(3, 3))
    assert "critical_sum" in _violation_names("5.5", p_list=(3, 3))
    assert "kappa_zero" in _violation_names("3.2", kappa=0.1)


def test_validate_flags_kappa_windows():
    assert "kappa_window" in _violation_names("4.3i", kappa=0.0)
    assert "kappa_window" in _violation_names("4.3i", kappa=0.5)
    assert "kappa_critical" in _violation_names("5.2", kappa=0.2)
    assert "kappa_match" in _violation_names("5.4", kappa=0.3)


def test_validate_flags_kernel_condition():
    e = derive(**VALID["3.3"])
    assert validate("3.3", e, kernels=(constant_kernel(1), constant_kernel(1))).ok
    v = validate("3.3", e, kernels=(sign_kernel(1), constant_kernel(1)))
    assert [name for name, _ in v.violated] == ["omega_equiv_one"]


def test_validate_flags_balance():
    assert "balance" in _violation_names("6.1", p_list=(2, 2))


def test_validate_flags_missing_outer():
    kwargs = dict(VALID["6.3i"])
    del kwargs["p_outer"]
    v = validate("6.3i", derive(**kwargs))
    assert "p_outer_range" in [name for name, _ in v.violated]


def test_validate_flags_bad_explicit_r():
    assert _violation_names("6.3i", r=1.5) == []
    assert "r_balance" in _violation_names("6.3i", r=1.3)


def test_validate_flags_morrey_star_window():
    assert "kappa_window" in _violation_names("6.6i", kappa=0.5)


def test_validate_s_range():
    assert "s_range" in _violation_names("2.1i", s=1.0)


def test_violations_carry_detail():
    v = validate("2.1i", derive(**dict(VALID["2.1i"], p_list=(8, 8))))
    (name, detail), = [x for x in v.violated if x[0] == "p_window"]
    assert "window" in detail or "must lie" in detail


def test_validate_unknown_id():
    with pytest.raises(KeyError, match="9.9"):
        validate("9.9", derive(**VALID["2.1i"]))


def test_kappa_chain_pinned():
    assert kappa_chain((4, 4), (2, 2), 0.5, 1) == pytest.approx(0.5, rel=1e-14)
    assert kappa_chain((3, 6), (2, 4), 0.5, 1) == pytest.approx(1 / 3, rel=1e-13)


def test_kappa_chain_rejects():
    with pytest.raises(ValueError, match="critical"):
        kappa_chain((3, 3), (2, 2), 0.5, 1)
    with pytest.raises(ValueError, match="strictly"):
        kappa_chain((4, 4), (4, 2), 0.5, 1)
    with pytest.raises(ValueError, match="disagree"):
        kappa_chain((4, 4), (2, 3), 0.5, 1)
    with pytest.raises(ValueError, match="length"):
        kappa_chain((4, 4), (2,), 0.5, 1)


def test_kappa_chain_matches_critical_relation():
    # the chain kappa always equals 1 - alpha p / n for the chosen p_i
    kap = kappa_chain((3, 6), (2, 4), 0.5, 1)
    e = derive(2, 1, 0.5, INF, (2, 4), kappa=kap)
    assert math.isclose(kap, 1.0 - e.alpha * e.p / e.n, rel_tol=1e-12)
