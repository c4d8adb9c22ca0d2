import math

import numpy as np
import pytest

from mfl.grid import GridFunction, make_ball_family, make_domain, sample
from mfl.kernel import angular_power_kernel, constant_kernel, sign_kernel
from mfl.operators import (
    EvalReport,
    OperatorSpec,
    eval_bilinear_grafakos,
    eval_fractional_integral,
    eval_fractional_maximal,
    eval_lerner_maximal,
    eval_noncentered_maximal,
    eval_power_maximal,
    fractional_integral_at,
    fractional_maximal_at,
    lerner_maximal_at,
    power_maximal_at,
    unit_cell_integral,
)


def box_indicator(domain, lo=0.0, hi=1.0, amp=1.0):
    return sample(domain, lambda p: amp * ((p[:, 0] > lo) & (p[:, 0] < hi)))


def test_spec_validation():
    with pytest.raises(ValueError, match="kind"):
        OperatorSpec("bogus", 1, 0.5)
    with pytest.raises(ValueError, match="m="):
        OperatorSpec("fractional_integral", 0, 0.5)
    with pytest.raises(ValueError, match="alpha"):
        OperatorSpec("fractional_integral", 1, 0.0)
    # alpha = 0 is the classical maximal operator, legal
    OperatorSpec("fractional_maximal_centered", 1, 0.0)


def test_kind_dispatch_guard(dom1):
    f = box_indicator(dom1)
    spec = OperatorSpec("fractional_maximal_centered", 1, 0.5)
    with pytest.raises(ValueError, match="not 'fractional_integral'"):
        eval_fractional_integral(spec, [f])
    with pytest.raises(ValueError, match="not 'fractional_maximal_centered'"):
        eval_fractional_maximal(OperatorSpec("fractional_integral", 1, 0.5), [f])


def test_input_arity_and_domains(dom1):
    f = box_indicator(dom1)
    g = box_indicator(make_domain(1, 4.0, 128))
    spec = OperatorSpec("fractional_integral", 2, 0.5)
    with pytest.raises(ValueError, match="m=2"):
        eval_fractional_integral(spec, [f])
    with pytest.raises(ValueError, match="share one domain"):
        eval_fractional_integral(spec, [f, g])


def test_alpha_window_enforced(dom1):
    f = box_indicator(dom1)
    with pytest.raises(ValueError, match="alpha"):
        eval_fractional_integral(OperatorSpec("fractional_integral", 1, 1.5), [f])
    with pytest.raises(ValueError, match="alpha"):
        eval_fractional_maximal(OperatorSpec("fractional_maximal_centered", 1, 1.0), [f])


def test_unit_cell_integral_pinned_rule():
    # the diagonal replacement uses the fixed 4-points-per-axis midpoint rule
    nodes = np.array([-0.375, -0.125, 0.125, 0.375])
    want = float(np.sum(np.abs(nodes) ** (0.5 - 1.0)) * 0.25)
    assert unit_cell_integral(1, 0.5) == want
    with pytest.raises(ValueError):
        unit_cell_integral(1, 0.0)


def test_integral_m1_closed_form():
    # I_{1/2} chi_(-1,1)(x) = 2 (sqrt(1-x) + sqrt(1+x)); indicator-edge
    # resolution is O(h), so the grid value converges at first order
    spec = OperatorSpec("fractional_integral", 1, 0.5)

    def dev(G, x):
        dom = make_domain(1, 4.0, G)
        f = sample(dom, lambda p: ((p[:, 0] > -1) & (p[:, 0] < 1)).astype(float))
        want = 2.0 * (math.sqrt(1.0 - x) + math.sqrt(1.0 + x))
        return abs(fractional_integral_at(spec, [f], (x,)) / want - 1.0)

    assert dev(1024, 0.0) < 2e-2
    assert dev(1024, 0.5) < 2e-2
    assert dev(1024, 0.0) < dev(256, 0.0)


def test_integral_m2_corner_value():
    # T_{1;2}(chi_(0,1), chi_(0,1))(0) = int_{[0,1]^2} |y|^{-1} dy = 2 ln(1 + sqrt 2)
    dom = make_domain(1, 2.0, 1024)
    g = box_indicator(dom)
    spec = OperatorSpec("fractional_integral", 2, 1.0)
    got = fractional_integral_at(spec, [g, g], (0.0,))
    want = 2.0 * math.log(1.0 + math.sqrt(2.0))
    assert got == pytest.approx(want, rel=5e-3)


def test_grid_matches_point_eval(dom1):
    f = box_indicator(dom1)
    g = sample(dom1, lambda p: np.exp(-p[:, 0] ** 2))
    from mfl.grid import cell_centers
    pts = cell_centers(dom1)
    s1 = OperatorSpec("fractional_integral", 1, 0.5)
    full = eval_fractional_integral(s1, [f]).output.values
    for k in (0, 63, 128, 255):
        at = fractional_integral_at(s1, [f], pts[k])
        assert at == pytest.approx(full[k], rel=1e-12)
    s2 = OperatorSpec("fractional_integral", 2, 0.7)
    full2 = eval_fractional_integral(s2, [f, g]).output.values
    for k in (10, 128, 200):
        at2 = fractional_integral_at(s2, [f, g], pts[k])
        assert at2 == pytest.approx(full2[k], rel=1e-12)


def test_output_domain_resamples(dom1):
    f = box_indicator(dom1)
    coarse = make_domain(1, 4.0, 8)
    spec = OperatorSpec("fractional_integral", 1, 0.5)
    rep = eval_fractional_integral(spec, [f], output_domain=coarse)
    assert rep.output.domain == coarse
    from mfl.grid import cell_centers
    pts = cell_centers(coarse)
    for k in range(coarse.size):
        assert rep.output.values[k] == fractional_integral_at(spec, [f], pts[k])


@pytest.mark.parametrize("m,alpha", [(1, 0.5), (2, 0.7), (3, 1.2)])
def test_dilation_covariance_1d(m, alpha):
    # f_lam(x) = f(x/2) on the doubled box shares the value array; the operator
    # then scales by 2^alpha exactly (all quadrature weights scale in lockstep)
    G = 64
    dom = make_domain(1, 2.0, G)
    dom2 = make_domain(1, 4.0, G)
    f = sample(dom, lambda p: np.exp(-3.0 * p[:, 0] ** 2))
    f2 = GridFunction(dom2, f.values)
    spec = OperatorSpec("fractional_integral", m, alpha)
    a = eval_fractional_integral(spec, [f] * m).output.values
    b = eval_fractional_integral(spec, [f2] * m).output.values
    np.testing.assert_allclose(b, 2.0 ** alpha * a, rtol=1e-12)


def test_dilation_covariance_2d():
    G = 16
    dom = make_domain(2, 1.0, G)
    dom2 = make_domain(2, 2.0, G)
    f = sample(dom, lambda p: np.exp(-2.0 * np.sum(p * p, axis=1)))
    f2 = GridFunction(dom2, f.values)
    for m, alpha in ((1, 0.8), (2, 1.3)):
        spec = OperatorSpec("fractional_integral", m, alpha)
        a = eval_fractional_integral(spec, [f] * m).output.values
        b = eval_fractional_integral(spec, [f2] * m).output.values
        np.testing.assert_allclose(b, 2.0 ** alpha * a, rtol=1e-12)


def test_integral_2d_disk_center_value():
    # I_1 chi_{|y| < R}(0) = 2 pi R in the plane
    dom = make_domain(2, 2.0, 96)
    disk = sample(dom, lambda p: (np.sum(p * p, axis=1) < 0.64).astype(float))
    spec = OperatorSpec("fractional_integral", 1, 1.0)
    got = fractional_integral_at(spec, [disk], (0.0, 0.0))
    assert got == pytest.approx(2.0 * math.pi * 0.8, rel=1e-2)


def test_integral_2d_m2_grid_cap():
    dom = make_domain(2, 1.0, 50)
    f = sample(dom, lambda p: np.ones(p.shape[0]))
    spec = OperatorSpec("fractional_integral", 2, 1.0)
    with pytest.raises(ValueError, match="cap"):
        eval_fractional_integral(spec, [f, f])


def test_2d_angular_power_kernel_rejected():
    dom = make_domain(2, 1.0, 16)
    f = sample(dom, lambda p: np.ones(p.shape[0]))
    spec = OperatorSpec("fractional_integral", 1, 0.5,
                        kernels=(angular_power_kernel(2, 0.5),))
    with pytest.raises(ValueError, match="node"):
        eval_fractional_integral(spec, [f])


def test_sign_kernel_odd_cancellation(dom1):
    # even input, odd kernel: the value at the symmetry point vanishes
    f = sample(dom1, lambda p: np.exp(-p[:, 0] ** 2))
    spec = OperatorSpec("fractional_integral", 1, 0.5, kernels=(sign_kernel(1),))
    assert abs(fractional_integral_at(spec, [f], (0.0,))) < 1e-12


def test_eval_report_fields(dom1):
    f = box_indicator(dom1)
    rep = eval_fractional_integral(OperatorSpec("fractional_integral", 1, 0.5), [f])
    assert isinstance(rep, EvalReport)
    assert rep.skipped_singular_nodes == dom1.size
    assert rep.h == dom1.spacing
    assert rep.wall_time >= 0.0


def test_maximal_indicator_exact_values():
    # M chi_(0,1)(2) peaks at the ladder radius r = 2 covering exactly (0, 4):
    # average = 1 / m(B(2, 2)) = 1/4, and the m = 2 square of it
    dom = make_domain(1, 4.0, 256)
    u = box_indicator(dom)
    m1 = OperatorSpec("fractional_maximal_centered", 1, 0.0)
    m2 = OperatorSpec("fractional_maximal_centered", 2, 0.0)
    assert fractional_maximal_at(m1, [u], (2.0,)) == 0.25
    assert fractional_maximal_at(m2, [u, u], (2.0,)) == 0.0625


def test_maximal_grid_matches_point(dom1):
    f = sample(dom1, lambda p: np.exp(-p[:, 0] ** 2) + 0.2)
    spec = OperatorSpec("fractional_maximal_centered", 1, 0.3)
    full = eval_fractional_maximal(spec, [f]).output.values
    from mfl.grid import cell_centers
    pts = cell_centers(dom1)
    for k in (0, 50, 128, 255):
        assert fractional_maximal_at(spec, [f], pts[k]) == pytest.approx(
            full[k], rel=1e-12)


def test_maximal_ladder_override(dom1):
    f = box_indicator(dom1)
    tiny = OperatorSpec("fractional_maximal_centered", 1, 0.0, ladder=(0.5,))
    dflt = OperatorSpec("fractional_maximal_centered", 1, 0.0)
    a = eval_fractional_maximal(tiny, [f]).output.values
    b = eval_fractional_maximal(dflt, [f]).output.values
    assert np.all(a <= b + 1e-15)


def test_noncentered_dominates_centered():
    # a stride-1 family contains every centered candidate ball
    dom = make_domain(1, 2.0, 64)
    fam = make_ball_family(dom, center_stride=1)
    f = sample(dom, lambda p: np.exp(-4.0 * p[:, 0] ** 2))
    cen = OperatorSpec("fractional_maximal_centered", 1, 0.4)
    non = OperatorSpec("fractional_maximal_noncentered", 1, 0.4)
    a = eval_fractional_maximal(cen, [f]).output.values
    b = eval_noncentered_maximal(non, [f], fam).output.values
    assert np.all(b >= a - 1e-12)


def test_noncentered_family_domain_checked(dom1):
    f = box_indicator(dom1)
    fam = make_ball_family(make_domain(1, 4.0, 128), center_stride=4)
    spec = OperatorSpec("fractional_maximal_noncentered", 1, 0.0)
    with pytest.raises(ValueError, match="share one domain"):
        eval_noncentered_maximal(spec, [f], fam)


def test_lerner_maps_constants_to_product(dom1):
    c1 = GridFunction(dom1, np.full(dom1.size, 1.7))
    c2 = GridFunction(dom1, np.full(dom1.size, 2.2))
    # prefix-sum windows round at the cumsum scale, not the window scale
    out = eval_lerner_maximal([c1, c2]).values
    np.testing.assert_allclose(out, 1.7 * 2.2, rtol=1e-12)


def test_lerner_at_matches_grid(dom1, corpus1):
    f, g = corpus1.members[0], corpus1.members[1]
    full = eval_lerner_maximal([f, g]).values
    from mfl.grid import cell_centers
    pts = cell_centers(dom1)
    for k in (3, 99, 201):
        assert lerner_maximal_at([f, g], pts[k]) == pytest.approx(full[k], rel=1e-13)


def test_power_maximal_unit_exponent_is_lerner(dom1, corpus1):
    fs = [corpus1.members[0], corpus1.members[2]]
    a = eval_power_maximal(fs, 1.0).values
    b = eval_lerner_maximal([GridFunction(dom1, np.abs(f.values)) for f in fs]).values
    np.testing.assert_allclose(a, b, rtol=1e-14)


def test_power_maximal_monotone_in_exponent(dom1, corpus1):
    # Jensen: a higher power mean dominates
    fs = [corpus1.members[0], corpus1.members[2]]
    a = eval_power_maximal(fs, 1.0).values
    b = eval_power_maximal(fs, 2.0).values
    assert np.all(b >= a * (1 - 1e-12))
    with pytest.raises(ValueError):
        eval_power_maximal(fs, 0.5)
    with pytest.raises(ValueError):
        power_maximal_at(fs, math.inf, (0.5,))


def test_bilinear_symmetry(dom1):
    f = box_indicator(dom1, -1.0, 0.5, amp=1.3)
    g = sample(dom1, lambda p: np.exp(-2.0 * p[:, 0] ** 2))
    a = eval_bilinear_grafakos(f, g, 0.5).values
    b = eval_bilinear_grafakos(g, f, 0.5).values
    np.testing.assert_array_equal(a, b)


def test_bilinear_center_value_converges():
    # B_{1/2}(chi_(-1,1), chi_(-1,1))(0) = int_{-1}^{1} |t|^{-1/2} dt = 4,
    # read off at the cell center h/2 next to the origin
    want = 4.0
    devs = []
    for G in (512, 2048):
        dom = make_domain(1, 4.0, G)
        w = sample(dom, lambda p: ((p[:, 0] > -1) & (p[:, 0] < 1)).astype(float))
        B = eval_bilinear_grafakos(w, w, 0.5)
        devs.append(abs(B.values[G // 2] / want - 1.0))
    assert devs[-1] < 3e-2
    assert devs[-1] < devs[0]


def test_bilinear_validation(dom1):
    f = box_indicator(dom1)
    g = box_indicator(make_domain(1, 4.0, 128))
    with pytest.raises(ValueError, match="domain"):
        eval_bilinear_grafakos(f, g, 0.5)
    with pytest.raises(ValueError, match="alpha"):
        eval_bilinear_grafakos(f, f, 1.5)


def test_bilinear_2d_symmetry():
    dom = make_domain(2, 1.0, 12)
    f = sample(dom, lambda p: np.exp(-np.sum(p * p, axis=1)))
    g = sample(dom, lambda p: (np.abs(p[:, 0]) < 0.4).astype(float))
    a = eval_bilinear_grafakos(f, g, 1.1).values
    b = eval_bilinear_grafakos(g, f, 1.1).values
    np.testing.assert_array_equal(a, b)


def test_point_eval_m3_unsupported(dom1):
    f = box_indicator(dom1)
    spec = OperatorSpec("fractional_integral", 3, 1.0)
    with pytest.raises(ValueError, match="m <= 2"):
        fractional_integral_at(spec, [f, f, f], (0.0,))
