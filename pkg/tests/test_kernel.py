import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfl.kernel import (
    angular_power_kernel,
    ball_kernel_norm,
    constant_kernel,
    eval_kernel,
    node_finite,
    parse_kernel,
    sign_kernel,
    sphere_measure,
    sphere_norm,
    spherical_mean,
    table_kernel,
)


def abs_cos_power_integral(gamma):
    # integral_0^{2 pi} |cos t|^{-gamma} dt for gamma < 1, via the Beta function
    return 2.0 * math.sqrt(math.pi) * math.gamma((1 - gamma) / 2) / math.gamma(1 - gamma / 2)


def test_sphere_measures():
    assert sphere_measure(1) == 2.0
    assert sphere_measure(2) == 2.0 * math.pi
    with pytest.raises(ValueError):
        sphere_measure(3)


def test_constant_kernel_eval():
    k = constant_kernel(2, 3.5)
    pts = np.array([[1.0, 0.0], [0.3, -0.4]])
    np.testing.assert_array_equal(eval_kernel(k, pts), [3.5, 3.5])
    assert eval_kernel(k, np.array([2.0, 1.0])) == 3.5


def test_sign_kernel_odd():
    k = sign_kernel(1)
    assert eval_kernel(k, np.array([0.7])) == 1.0
    assert eval_kernel(k, np.array([-0.7])) == -1.0


def test_eval_rejects_origin():
    k = constant_kernel(2)
    with pytest.raises(ValueError, match="origin"):
        eval_kernel(k, np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_eval_rejects_dim_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        eval_kernel(constant_kernel(1), np.array([[1.0, 2.0]]))


@given(
    st.floats(min_value=0.05, max_value=0.45),
    st.floats(min_value=0.01, max_value=100.0),
    st.floats(min_value=-1.5, max_value=1.5),
    st.floats(min_value=-1.5, max_value=1.5),
)
def test_homogeneity_degree_zero(beta, lam, x0, x1):
    # Omega(lam x) = Omega(x) for every lam > 0
    if x0 * x0 + x1 * x1 < 1e-6 or abs(x0) < 1e-6:
        return
    x = np.array([[x0, x1]])
    for k in (constant_kernel(2, 1.7), sign_kernel(2, 1),
              angular_power_kernel(2, beta), table_kernel([1.0, 2.0, 0.5, 3.0])):
        v1 = eval_kernel(k, x)[0]
        v2 = eval_kernel(k, lam * x)[0]
        assert np.isclose(v1, v2, rtol=1e-12), f"{k.form}: {v1} != {v2}"


def test_sphere_norm_1d_exact():
    assert sphere_norm(constant_kernel(1, 2.0), 3.0) == pytest.approx(
        (2 * 2.0 ** 3) ** (1 / 3), rel=1e-15)
    assert sphere_norm(sign_kernel(1), math.inf) == 1.0
    assert sphere_norm(sign_kernel(1), 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_sphere_norm_2d_constant():
    assert sphere_norm(constant_kernel(2, 1.0), 2.0) == pytest.approx(
        math.sqrt(2 * math.pi), rel=1e-14)
    assert sphere_norm(constant_kernel(2, 4.0), math.inf) == 4.0


def test_sphere_norm_angular_power_closed_form():
    # |cos|^{-beta} on S^1 against the Beta-function value, both axes
    for beta, s in [(0.25, 2.0), (0.45, 2.0), (0.3, 3.0), (-0.5, 2.0)]:
        gamma = beta * s
        want = abs_cos_power_integral(gamma) ** (1 / s)
        for axis in (1, 2):
            got = sphere_norm(angular_power_kernel(2, beta, axis), s)
            assert np.isclose(got, want, rtol=5e-7), (beta, s, axis, got, want)


def test_sphere_norm_rejects_nonintegrable():
    with pytest.raises(ValueError, match="not in L"):
        sphere_norm(angular_power_kernel(2, 0.6), 2.0)
    with pytest.raises(ValueError, match="not in L"):
        sphere_norm(angular_power_kernel(2, 0.1), math.inf)
    with pytest.raises(ValueError, match="s >= 1"):
        sphere_norm(constant_kernel(2), 0.5)


def test_ball_kernel_norm_closed_form():
    # constant kernel, n = 1: (int_{-R}^{R} 1)^{1/s} = (2R)^{1/s}
    assert ball_kernel_norm(constant_kernel(1), 2.0, 1.0) == pytest.approx(
        math.sqrt(2.0), rel=1e-15)
    assert ball_kernel_norm(constant_kernel(1), 2.0, 4.0) == pytest.approx(
        math.sqrt(8.0), rel=1e-15)
    # n = 2: (pi R^2)^{1/s}
    assert ball_kernel_norm(constant_kernel(2), 2.0, 3.0) == pytest.approx(
        math.sqrt(math.pi * 9.0), rel=1e-14)
    assert ball_kernel_norm(constant_kernel(2, 5.0), math.inf, 7.0) == 5.0
    with pytest.raises(ValueError):
        ball_kernel_norm(constant_kernel(1), 2.0, 0.0)


def test_spherical_mean():
    assert spherical_mean(constant_kernel(1, 2.5)) == 2.5
    assert spherical_mean(sign_kernel(1)) == 0.0
    assert spherical_mean(sign_kernel(1), absolute=True) == 1.0
    assert spherical_mean(table_kernel([1.0, -3.0])) == -1.0
    assert spherical_mean(table_kernel([1.0, -3.0]), absolute=True) == 2.0
    got = spherical_mean(angular_power_kernel(2, 0.5))
    want = abs_cos_power_integral(0.5) / (2 * math.pi)
    assert np.isclose(got, want, rtol=5e-7)
    with pytest.raises(ValueError, match="beta"):
        spherical_mean(angular_power_kernel(2, 1.2))


def test_table_kernel_sectors():
    k = table_kernel([2.0, 0.0, 0.0, 0.0])
    # first sector is [0, pi/2)
    assert eval_kernel(k, np.array([1.0, 1.0])) == 2.0
    assert eval_kernel(k, np.array([-1.0, 1.0])) == 0.0
    assert sphere_norm(k, 2.0) == pytest.approx(math.sqrt(4.0 * math.pi / 2), rel=1e-14)
    with pytest.raises(ValueError):
        table_kernel([])


def test_parse_kernel_roundtrip():
    assert parse_kernel(1, "const:2.5") == constant_kernel(1, 2.5)
    assert parse_kernel(2, "angpow:0.3:2") == angular_power_kernel(2, 0.3, 2)
    assert parse_kernel(1, "sign:1") == sign_kernel(1, 1)


@pytest.mark.parametrize("bad", ["const", "angpow:0.3", "const:xyz",
                                 "bogus:1", "sign:1:2", ""])
def test_parse_kernel_rejects(bad):
    with pytest.raises(ValueError, match="descriptor"):
        parse_kernel(1, bad)


def test_parse_kernel_axis_range():
    with pytest.raises(ValueError):
        parse_kernel(1, "sign:2")
    with pytest.raises(ValueError):
        angular_power_kernel(2, 0.3, axis=3)


def test_node_finite():
    assert node_finite(constant_kernel(2))
    assert node_finite(angular_power_kernel(1, 0.5))
    assert node_finite(sign_kernel(2))
    assert not node_finite(angular_power_kernel(2, 0.5))
    assert node_finite(angular_power_kernel(2, -0.5))
