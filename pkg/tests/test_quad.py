import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardybloch.core import ConfigError, HoloFun, constant, gallery_symbol, linear_combination
from hardybloch.ops import extremal_fw
from hardybloch.quad import (
    DEFAULT_HEIGHTS,
    NonConvergenceError,
    QuadConfig,
    cauchy_derivative,
    derivative,
    hardy_norm,
    line_l2,
    path_integral,
    segment_integral,
)
from hardybloch.rng import sample_points

GALLERY = ["zero", "const:1", "cayley", "inv", "exp_iz", "exp_isqrtz"]


def closed_line(y, v=1.0):
    # integral of |f_{iv}(x + iy)|^2 dx
    return v ** 3 / (2 * (y + v) ** 3)


def test_config_validation():
    for kw, field in [({"rel_tol": 0}, "quad.rel_tol"), ({"abs_tol": -1.0}, "quad.abs_tol"),
                      ({"max_depth": 0}, "quad.max_depth"), ({"circle_ratio": 1.0}, "quad.circle_ratio"),
                      ({"gauss_order": 2.5}, "quad.gauss_order")]:
        with pytest.raises(ConfigError) as e:
            QuadConfig(**kw)
        assert e.value.field == field


def test_segment_examples():
    assert segment_integral(lambda z: 1 + 0 * z, 1j, 1 + 1j).value == pytest.approx(1, abs=1e-14)
    assert segment_integral(lambda z: z, 1j, 2j).value == pytest.approx(-1.5, abs=1e-14)
    assert segment_integral(lambda z: 1 / z, 1j, 2j).value == pytest.approx(math.log(2), rel=1e-13)


def test_empty_path_is_zero():
    assert segment_integral(lambda z: z, 1 + 1j, 1 + 1j).value == 0


def test_near_boundary_segment():
    # antiderivative of 1/(z+i)^2 is -1/(z+i)
    a, b = -100 + 1e-4j, 100 + 1e-4j
    exact = -1 / (b + 1j) + 1 / (a + 1j)
    assert segment_integral(lambda z: 1 / (z + 1j) ** 2, a, b).value == pytest.approx(exact, rel=1e-10)


def test_path_integral_of_polynomial():
    pts = [1j, 2 + 1j, 2 + 3j]
    assert path_integral(lambda z: 3 * z ** 2, pts).value == pytest.approx((2 + 3j) ** 3 - (1j) ** 3, rel=1e-13)


def test_nonconvergence_raises_with_best_estimate():
    cfg = QuadConfig(max_depth=1, gauss_order=2)
    with pytest.raises(NonConvergenceError) as e:
        segment_integral(lambda z: np.exp(1j * 40 * z), 0.1j, 30 + 0.1j, cfg)
    assert np.isfinite(e.value.value)


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0.05, 5), st.floats(-5, 5), st.floats(0.05, 5))
def test_segment_antisymmetric_and_additive(x1, y1, x2, y2):
    h = lambda z: np.exp(1j * z) / (z + 1j) ** 2  # noqa: E731
    a, b = complex(x1, y1), complex(x2, y2)
    ab = segment_integral(h, a, b).value
    assert abs(ab + segment_integral(h, b, a).value) <= 1e-12
    m = 0.5 * (a + b)
    assert abs(ab - segment_integral(h, a, m).value - segment_integral(h, m, b).value) <= 1e-11


def test_cauchy_examples():
    sq = HoloFun(lambda z: z ** 2)
    assert cauchy_derivative(sq, 1j, 1) == pytest.approx(2j, abs=1e-13)
    assert cauchy_derivative(sq, 3 + 1j, 2) == pytest.approx(2, abs=1e-12)
    g = gallery_symbol("exp_iz")
    assert cauchy_derivative(g, 1j, 1) == pytest.approx(1j * math.exp(-1), abs=1e-10)


@pytest.mark.parametrize("id", GALLERY)
def test_cauchy_order_zero_reproduces_f(id):
    f = gallery_symbol(id)
    pts = sample_points(11, 100)
    assert np.max(np.abs(cauchy_derivative(f, pts, 0) - f.fn(pts))) <= 1e-12


@pytest.mark.parametrize("id", GALLERY)
def test_cauchy_radius_independent(id):
    f = gallery_symbol(id)
    pts = sample_points(12, 100)
    for n in (1, 2):
        a = cauchy_derivative(f, pts, n, ratio=0.25)
        b = cauchy_derivative(f, pts, n, ratio=0.5)
        assert np.max(np.abs(a - b) / (1 + np.abs(b))) <= 1e-9


def test_derivative_uses_exact_channel_and_falls_back():
    g = gallery_symbol("cayley")
    z = 0.3 + 0.4j
    assert derivative(g, z, 1) == g.deriv(z)
    bare = HoloFun(g.fn)
    assert derivative(bare, z, 1) == pytest.approx(g.deriv(z), rel=1e-10)
    assert derivative(g, z, 2) == pytest.approx(-4j / (z + 1j) ** 3, rel=1e-10)
    with pytest.raises(ValueError):
        derivative(g, z, 3)


@pytest.mark.parametrize("y", [1e-3, 0.1, 1.0, 10.0])
def test_line_l2_closed_form(y):
    assert line_l2(extremal_fw(1j), y).value == pytest.approx(closed_line(y), rel=1e-9)


def test_line_l2_examples():
    assert line_l2(extremal_fw(1j), 1.0).value == pytest.approx(0.0625, rel=1e-10)
    assert line_l2(extremal_fw(1j), 1e-3).value == pytest.approx(0.49850, abs=1e-5)
    assert line_l2(constant(0), 1.0).value == 0


def test_line_l2_truncates_for_non_h2_function():
    r = line_l2(constant(1), 1.0)
    assert r.truncated and r.extent >= 1e7


def test_hardy_norm_examples():
    e = hardy_norm(extremal_fw(1j))
    assert e.value == pytest.approx(1 / math.sqrt(2), rel=1e-3)
    assert e.boundary and not e.divergent
    assert hardy_norm(constant(0)).value == 0
    assert hardy_norm(extremal_fw(2j), 2 * DEFAULT_HEIGHTS).value == pytest.approx(e.value, rel=1e-9)


def test_hardy_norm_flags_non_h2():
    assert hardy_norm(constant(1), [1.0]).divergent


@pytest.mark.parametrize("w", [1j, 2j, 0.5j, 3 + 1j, -3 + 0.1j, 1 + 4j, -1 + 0.25j, 2 + 0.5j, 1e-7j])
def test_hardy_norm_extremal_family_constant(w):
    v = hardy_norm(extremal_fw(w), w.imag * DEFAULT_HEIGHTS, center=w.real).value
    assert v == pytest.approx(1 / math.sqrt(2), rel=0.01)


def test_hardy_norm_monotone_in_heights():
    f = linear_combination([(1, extremal_fw(1j)), (0.5j, extremal_fw(2 + 0.5j))])
    small = hardy_norm(f, np.logspace(-1, 2, 7)).value
    large = hardy_norm(f, np.logspace(-4, 3, 41)).value
    assert large >= small
    with pytest.raises(ValueError):
        hardy_norm(f, [])
