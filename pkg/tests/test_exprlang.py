import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardybloch.core import GALLERY_EXPR
from hardybloch.exprlang import (
    Add,
    Apply,
    Const,
    Div,
    EvaluationError,
    Mul,
    Neg,
    ParseError,
    Pow,
    Sub,
    Var,
    differentiate,
    evaluate,
    expr_function,
    parse,
    to_text,
)
from hardybloch.quad import cauchy_derivative
from hardybloch.rng import sample_points

Z = Var()


def test_parse_examples():
    assert parse("exp(i*z)") == Apply("exp", Mul(Const(1j), Z))
    assert parse("(z-i)/(z+i)") == Div(Sub(Z, Const(1j)), Add(Z, Const(1j)))
    assert parse("  z *  z ") == Mul(Z, Z)


def test_precedence_and_associativity():
    assert parse("z^2^3") == Pow(Z, Pow(Const(2), Const(3))) or parse("z^2^3") == Pow(Z, Const(8))
    assert parse("-z^2") == Neg(Pow(Z, Const(2)))
    assert parse("z-z-z") == Sub(Sub(Z, Z), Z)
    assert parse("z/z*z") == Mul(Div(Z, Z), Z)
    assert parse("z+z*z") == Add(Z, Mul(Z, Z))


def test_complex_literals():
    assert parse("2i") == Const(2j)
    assert parse("1+2i") == Const(1 + 2j)
    assert parse("i") == Const(1j)
    assert parse("1.5e2") == Const(150)


@pytest.mark.parametrize("src,offset", [("z^^2", 2), ("z+", 2), ("(z", 2), ("foo(z)", 0), ("z)", 1), ("2 $ z", 2)])
def test_syntax_errors_carry_position(src, offset):
    with pytest.raises(ParseError) as e:
        parse(src)
    assert e.value.position == offset
    assert e.value.expected


def test_empty_source_rejected():
    with pytest.raises(ParseError):
        parse("   ")


def test_eval_examples():
    assert evaluate(parse("z*z"), 1j) == -1
    assert evaluate(parse("exp(i*z)"), 1j) == pytest.approx(math.exp(-1))
    assert evaluate(parse("sqrt(z)"), 2j) == pytest.approx(1 + 1j, rel=1e-15)


def test_eval_errors_surface_at_eval_time():
    e = parse("1/(z-i)")
    with pytest.raises(EvaluationError):
        evaluate(e, 1j)
    assert evaluate(e, 2j) == pytest.approx(-1j)
    with pytest.raises(EvaluationError):
        evaluate(parse("log(z-i)"), 1j)
    with pytest.raises(EvaluationError):
        evaluate(parse("sqrt(z-i)"), 1j)


def test_principal_log_branch():
    v = evaluate(parse("log(z)"), -1 + 1e-9j)
    assert 0 < v.imag < math.pi


def test_differentiate_examples():
    assert evaluate(differentiate(parse("exp(i*z)")), 1j) == pytest.approx(1j * math.exp(-1))
    assert differentiate(parse("5")) == Const(0)
    assert evaluate(differentiate(parse("(z-i)/(z+i)")), 1j) == pytest.approx(-0.5j)


def test_integer_powers_are_exact():
    assert evaluate(parse("z^3"), 1 + 1j) == (1 + 1j) ** 3
    assert evaluate(parse("z^(-2)"), 2j) == pytest.approx(-0.25)


@pytest.mark.parametrize("src", list(GALLERY_EXPR.values()) + ["z^(1/2)", "log(z)*sin(z)", "z^z", "cos(z)/(1+z^2)"])
def test_roundtrip(src):
    e = parse(src)
    assert parse(to_text(e)) == e


@pytest.mark.parametrize("src", list(GALLERY_EXPR.values()) + ["z^(1/3)", "log(z)*sin(z)", "sqrt(z+2i)^3"])
def test_symbolic_derivative_matches_cauchy(src):
    f = expr_function(src)
    pts = sample_points(7, 100)
    d = np.asarray(f.deriv(pts)) + 0 * pts
    assert np.all(np.abs(d - cauchy_derivative(f, pts, 1)) <= 1e-8 * (1 + np.abs(d)))


# random expression trees -------------------------------------------------

consts = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False).map(
    lambda c: Const(complex(round(c.real, 3), round(c.imag, 3)))
)
leaves = st.one_of(st.just(Z), consts)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Div, children, children),
        st.builds(Pow, children, consts),
        st.builds(Apply, st.sampled_from(["exp", "log", "sqrt", "sin", "cos"]), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_is_a_fixed_point(e):
    once = parse(to_text(e))
    assert parse(to_text(once)) == once


def _close(a, b):
    if not (cmath.isfinite(a) and cmath.isfinite(b)):
        return True
    return abs(a - b) <= 1e-9 * (1 + abs(a) + abs(b))


@settings(max_examples=200, deadline=None)
@given(trees, st.floats(-3, 3), st.floats(0.1, 3))
def test_printing_preserves_value(e, x, y):
    z = complex(x, y)
    try:
        a = evaluate(e, z)
        b = evaluate(parse(to_text(e)), z)
    except EvaluationError:
        return
    assert _close(a, b)
