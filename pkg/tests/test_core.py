import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hardybloch.core import (
    ConfigError,
    Point,
    SearchRegion,
    Strip,
    constant,
    gallery_expression,
    gallery_symbol,
    linear_combination,
    parse_complex,
    region_points,
)


def test_point_requires_upper_half_plane():
    with pytest.raises(ValueError):
        Point(0.0, 0.0)
    with pytest.raises(ValueError):
        Point(1.0, -2.0)
    with pytest.raises(ValueError):
        Point(math.nan, 1.0)
    assert Point(1.5, 2.0).z == 1.5 + 2j
    assert Point.of(3 + 4j) == Point(3.0, 4.0)


def test_gallery_examples():
    assert gallery_symbol("zero").eval(1j) == 0
    assert gallery_symbol("inv").eval(1j) == pytest.approx(0.5)
    assert abs(gallery_symbol("exp_isqrtz").eval(2j)) == pytest.approx(math.exp(-1), rel=1e-14)
    assert gallery_symbol("const:2.5").eval(3 + 1j) == 2.5
    assert gallery_symbol("const:1,2").eval(1j) == 1 + 2j


def test_unknown_gallery_id_is_config_error():
    with pytest.raises(ConfigError):
        gallery_symbol("exp_z")
    with pytest.raises(ConfigError):
        gallery_symbol("const:abc")


@pytest.mark.parametrize("id", ["cayley", "inv", "exp_iz", "exp_isqrtz"])
def test_closed_form_derivatives_match_difference_quotient(id):
    g = gallery_symbol(id)
    z = np.array([0.3 + 0.7j, -2 + 0.1j, 5 + 3j])
    h = 1e-6
    fd = (g.fn(z + h) - g.fn(z - h)) / (2 * h)
    assert np.allclose(g.deriv(z), fd, rtol=1e-7, atol=1e-9)


def test_gallery_expressions_exist_for_named_symbols():
    assert gallery_expression("cayley") == "(z-i)/(z+i)"
    with pytest.raises(ConfigError):
        gallery_expression("nope")


def test_exp_iz_modulus_on_default_grid():
    z = np.array([p.z for p in region_points(SearchRegion())])
    v = np.abs(gallery_symbol("exp_iz").fn(z))
    assert np.allclose(v, np.exp(-z.imag), rtol=1e-12, atol=0)


def test_cayley_strictly_inside_disc_on_moderate_grid():
    z = np.array([p.z for p in region_points(SearchRegion(1e-3, 1e3, 1e3, 31, 65))])
    assert np.max(np.abs(gallery_symbol("cayley").fn(z))) < 1


@given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3))
def test_cayley_modulus_below_one(x, y):
    assert abs(gallery_symbol("cayley").eval(complex(x, y))) < 1


@given(st.floats(-50, 50), st.floats(1e-6, 50))
def test_exp_isqrtz_bounded_by_one(x, y):
    assert abs(gallery_symbol("exp_isqrtz").eval(complex(x, y))) <= 1 + 1e-15


def test_strip_validation():
    Strip(1.0, 1.0)
    with pytest.raises(ConfigError):
        Strip(0.0, 1.0)
    with pytest.raises(ConfigError):
        Strip(2.0, 1.0)


def test_region_examples():
    r = SearchRegion(1.0, 1.0, 0.0, 1, 1)
    assert region_points(r) == [Point(0.0, 1.0)]
    r = SearchRegion(0.01, 100, 10, 5, 7)
    assert np.allclose(r.heights(), [0.01, 0.1, 1, 10, 100], rtol=1e-14)
    assert len(region_points(r)) == 35
    assert region_points(r) == region_points(r)


def test_region_abscissae_symmetric_and_exact_endpoints():
    xs = SearchRegion().abscissae()
    assert xs[0] == -1e6 and xs[-1] == 1e6 and xs[64] == 0
    assert np.all(np.diff(xs) > 0)
    assert np.allclose(xs, -xs[::-1])


def test_region_validation():
    with pytest.raises(ConfigError) as e:
        SearchRegion(y_min=0.0)
    assert e.value.field == "region.y_min"
    with pytest.raises(ConfigError):
        SearchRegion(y_grid=1)
    with pytest.raises(ConfigError):
        SearchRegion(x_max=-1.0)


def test_region_scales_are_nested():
    r = SearchRegion()
    prev = None
    for s in (0.125, 0.25, 0.5, 1.0):
        sub = r.at_scale(s)
        if prev is not None:
            assert sub.y_min <= prev.y_min and sub.y_max >= prev.y_max and sub.x_max >= prev.x_max
        prev = sub
    assert r.at_scale(1.0) == r


def test_refined_keeps_original_grid():
    r = SearchRegion(1e-2, 1e2, 10, 9, 17)
    f = r.refined(2)
    assert np.allclose(f.heights()[::2], r.heights(), rtol=1e-13)
    assert np.allclose(f.abscissae()[::2], r.abscissae(), rtol=1e-13)


def test_linear_combination_and_constant():
    f = linear_combination([(2, gallery_symbol("inv")), (1j, constant(3))])
    z = 0.5 + 2j
    assert f.eval(z) == pytest.approx(2 * gallery_symbol("inv").eval(z) + 3j)
    assert f.d(z) == pytest.approx(2 * gallery_symbol("inv").d(z))


def test_shifted():
    g = gallery_symbol("cayley")
    assert g.shifted(2.0).eval(1j) == pytest.approx(g.eval(2 + 1j))


def test_parse_complex():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("0,1") == 1j
    with pytest.raises(ConfigError):
        parse_complex("1,2,3")
