from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import Polynomial

from maxface.errors import (EvaluationError, ExprSyntaxError, NonIntegerExponent,
                            OrderOverflow, PoleError, UnknownIdentifier)
from maxface.expr import (Div, Func, Num, Pow, Sub, Var, diff, eval_complex, eval_real,
                          jet_at, parse_expr, to_string)
from maxface.jet import jet_mul


def test_parse_function_application():
    assert parse_expr("sin(u)") == Func("sin", Var())


def test_parse_precedence():
    e = parse_expr("u - u^3/3")
    assert e == Sub(Var(), Div(Pow(Var(), 3), Num(Fraction(3))))


def test_parse_t_is_u():
    assert parse_expr("sin(t)") == parse_expr("sin(u)")


def test_unary_minus_binds_looser_than_power():
    assert eval_real(parse_expr("-u^2"), 3.0) == -9.0
    assert eval_real(parse_expr("2^-1"), 0.0) == 0.5
    assert eval_real(parse_expr("u^(-2)"), 2.0) == 0.25


def test_incomplete_input_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("u + ")
    assert info.value.offset == 4


@pytest.mark.parametrize("text, exc, offset", [
    ("foo(u)", UnknownIdentifier, 0),
    ("u + x", UnknownIdentifier, 4),
    ("u^0.5", NonIntegerExponent, 2),
    ("u^u", NonIntegerExponent, 2),
    ("(u + 1", ExprSyntaxError, 6),
    ("u $ 2", ExprSyntaxError, 2),
    ("", ExprSyntaxError, 0),
])
def test_parse_errors(text, exc, offset):
    with pytest.raises(exc) as info:
        parse_expr(text)
    assert info.value.offset == offset


def test_decimal_constants_are_exact():
    assert parse_expr("0.1") == Num(Fraction(1, 10))
    assert parse_expr("1.5e-3") == Num(Fraction(3, 2000))


# -- round trip -------------------------------------------------------------------

_leaf = st.one_of(
    st.just("u"),
    st.integers(0, 50).map(str),
    st.decimals(min_value=0, max_value=100, places=3, allow_nan=False).map(str),
)


def _combine(children):
    binop = st.tuples(children, st.sampled_from(["+", "-", "*", "/"]), children).map(
        lambda t: f"({t[0]} {t[1]} {t[2]})")
    func = st.tuples(st.sampled_from(["sin", "cos", "exp", "sqrt"]), children).map(
        lambda t: f"{t[0]}({t[1]})")
    power = st.tuples(children, st.integers(-3, 5)).map(lambda t: f"({t[0]})^({t[1]})")
    neg = children.map(lambda s: f"-{s}")
    return st.one_of(binop, func, power, neg)


@settings(max_examples=200, deadline=None)
@given(st.recursive(_leaf, _combine, max_leaves=12))
def test_print_parse_round_trip(text):
    e = parse_expr(text)
    assert parse_expr(to_string(e)) == e


# -- evaluation -------------------------------------------------------------------

def test_eval_examples():
    assert eval_complex(parse_expr("u^2"), 1j) == -1
    assert eval_complex(parse_expr("sin(u)"), 0) == 0
    assert eval_complex(parse_expr("1+u^2"), 1 + 1j) == 1 + 2j


def test_eval_vectorized():
    z = np.array([[0.0, 1j], [2.0, -1j]])
    out = eval_complex(parse_expr("exp(u)"), z)
    assert out.shape == (2, 2)
    np.testing.assert_allclose(out, np.exp(z))


def test_division_by_zero_reported():
    with pytest.raises(EvaluationError):
        eval_complex(parse_expr("1/u"), 0.0)


def test_sqrt_branch_cut_reported():
    with pytest.raises(EvaluationError):
        eval_complex(parse_expr("sqrt(u)"), -1.0)
    assert eval_complex(parse_expr("sqrt(u)"), -1 + 1e-3j).imag > 0


_SAMPLE_EXPRS = ["sin(u)*exp(u/2) - u^3", "sqrt(2 + u^2)/(1 + u^2)", "cos(u)^3 - 1/(3 + u)",
                 "u*(u - 1)^2*cos(u)"]


@pytest.mark.parametrize("text", _SAMPLE_EXPRS)
def test_real_axis_matches_real_eval(text):
    e = parse_expr(text)
    u = np.linspace(-0.9, 0.9, 13)
    z = eval_complex(e, u + 0j)
    np.testing.assert_allclose(z.real, eval_real(e, u), rtol=1e-15, atol=1e-15)
    assert np.all(np.abs(z.imag) <= 1e-15 * (1 + np.abs(z.real)))


@pytest.mark.parametrize("text", _SAMPLE_EXPRS)
def test_cauchy_riemann(text):
    e = parse_expr(text)
    h = 1e-6
    for z in [0.3 + 0.2j, -0.5 + 0.4j, 0.1 - 0.3j]:
        dx = (eval_complex(e, z + h) - eval_complex(e, z - h)) / (2 * h)
        dy = (eval_complex(e, z + 1j * h) - eval_complex(e, z - 1j * h)) / (2 * h)
        # f_y = i f_x for holomorphic f
        assert abs(dy - 1j * dx) < 1e-7 * max(1.0, abs(dx))


@pytest.mark.parametrize("text", _SAMPLE_EXPRS)
def test_schwarz_reflection(text):
    e = parse_expr(text)
    z = np.array([0.3 + 0.2j, -0.5 + 0.4j, 0.7 - 0.1j])
    a = eval_complex(e, np.conj(z))
    b = np.conj(eval_complex(e, z))
    np.testing.assert_allclose(a, b, rtol=1e-14)


# -- jets -------------------------------------------------------------------------

def test_jet_sin():
    np.testing.assert_allclose(jet_at(parse_expr("sin(u)"), 0.0, 3).coeffs,
                               [0, 1, 0, -1 / 6], atol=1e-16)


def test_jet_cubic():
    np.testing.assert_allclose(jet_at(parse_expr("u - u^3/3"), 0.0, 3).coeffs,
                               [0, 1, 0, -1 / 3], atol=1e-16)


def test_jet_sqrt_binomial():
    j = jet_at(parse_expr("sqrt(1+u)"), 0.0, 2)
    np.testing.assert_allclose(j.coeffs, [1, 0.5, -0.125], atol=1e-16)
    # independent check of c1 and c2 by finite differences
    e = parse_expr("sqrt(1+u)")
    h = 1e-4
    f = lambda x: eval_real(e, x)
    assert abs((f(h) - f(-h)) / (2 * h) - j.coeffs[1].real) < 1e-8
    assert abs((f(h) - 2 * f(0) + f(-h)) / (2 * h * h) - j.coeffs[2].real) < 1e-6


def test_jet_order_overflow():
    with pytest.raises(OrderOverflow):
        jet_at(parse_expr("u"), 0.0, 17)


def test_jet_pole():
    with pytest.raises(PoleError):
        jet_at(parse_expr("1/u"), 0.0, 4)


def test_jet_removable_singularity():
    j = jet_at(parse_expr("sin(u)/u"), 0.0, 6)
    np.testing.assert_allclose(j.coeffs[:5], [1, 0, -1 / 6, 0, 1 / 120], atol=1e-14)


def test_jet_sqrt_on_branch_cut():
    with pytest.raises(EvaluationError):
        jet_at(parse_expr("sqrt(u - 1)"), 0.0, 3)


@pytest.mark.parametrize("text", _SAMPLE_EXPRS)
def test_jet_vs_finite_differences(text):
    e = parse_expr(text)
    h = 1e-5
    for u in [-0.4, 0.1, 0.6]:
        fd = (eval_real(e, u + h) - eval_real(e, u - h)) / (2 * h)
        c1 = jet_at(e, u, 1).coeffs[1].real
        assert abs(fd - c1) <= 1e-6 * max(1.0, abs(c1))


def _taylor_shift(p, u0, k):
    """Coefficients of p(u0 + x), padded to k + 1."""
    q = p(Polynomial([u0, 1.0]))
    c = np.zeros(k + 1)
    c[:len(q.coef)] = q.coef[:k + 1]
    return c


def _poly_text(coef):
    return " + ".join(f"({c})*u^{i}" for i, c in enumerate(coef))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5),
       st.lists(st.integers(-9, 9), min_size=1, max_size=5),
       st.sampled_from([-1.0, -0.25, 0.0, 0.5, 2.0]))
def test_polynomial_jets_against_numpy(pc, qc, u0):
    p, q = parse_expr(_poly_text(pc)), parse_expr(_poly_text(qc))
    k = 10
    prod = jet_at(p * q, u0, k).coeffs
    oracle = _taylor_shift(Polynomial(pc) * Polynomial(qc), u0, k)
    scale = max(1.0, np.max(np.abs(oracle)))
    np.testing.assert_allclose(prod.real, oracle, atol=1e-12 * scale)
    via_mul = jet_mul(jet_at(p, u0, k), jet_at(q, u0, k)).coeffs
    np.testing.assert_allclose(via_mul, prod, atol=1e-12 * scale)


@pytest.mark.parametrize("text", _SAMPLE_EXPRS + ["u^-2 + exp(-u)"])
def test_symbolic_diff_matches_jet(text):
    e = parse_expr(text)
    for u in [0.3, 0.8]:
        d = eval_real(diff(e), u)
        assert math.isclose(d, jet_at(e, u, 1).coeffs[1].real, rel_tol=1e-12, abs_tol=1e-14)
