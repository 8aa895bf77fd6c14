import math

import numpy as np
import pytest
from scipy.special import binom

from maxface.errors import EvaluationError, PoleError
from maxface.jet import Jet, jet_div


def test_removable_quotient():
    u2 = Jet(0.0, [0, 0, 1, 0])
    u = Jet(0.0, [0, 1, 0, 0])
    q = jet_div(u2, u)
    np.testing.assert_allclose(q.coeffs, [0, 1, 0])


def test_common_zero_then_divide():
    # 2u / (u + u^2) = 2 / (1 + u)
    q = jet_div(Jet(0.0, [0, 2, 0]), Jet(0.0, [0, 1, 1]))
    np.testing.assert_allclose(q.coeffs, [2, -2])


def test_pole():
    with pytest.raises(PoleError):
        jet_div(Jet(0.0, [1, 0]), Jet(0.0, [0, 1]))


def test_zero_divisor():
    with pytest.raises(PoleError):
        jet_div(Jet(0.0, [1, 2, 3]), Jet(0.0, [0, 0, 0]))


def test_division_by_number_zero():
    with pytest.raises(EvaluationError):
        Jet(0.0, [1, 2]) / 0


def test_immutable():
    j = Jet(0.0, [1, 2])
    with pytest.raises(AttributeError):
        j.base = 1.0
    with pytest.raises(ValueError):
        j.coeffs[0] = 3


def test_deriv_factorials():
    j = Jet(0.0, [1, 1, 1 / 2, 1 / 6, 1 / 24])  # exp at 0
    assert [j.deriv(i).real for i in range(5)] == pytest.approx([1] * 5)


def test_leading_zeros_relative_policy():
    assert Jet(0.0, [1e-13, 0, 1]).leading_zeros() == 2
    assert Jet(0.0, [1e-8, 0, 1]).leading_zeros() == 0
    assert Jet(0.0, [0, 0, 0]).is_zero


def test_exp_sin_cos_against_series():
    x = Jet.variable(0.0, 8)
    fact = [math.factorial(i) for i in range(9)]
    np.testing.assert_allclose(x.exp().coeffs, [1 / f for f in fact], atol=1e-16)
    s = [0 if i % 2 == 0 else (-1) ** (i // 2) / fact[i] for i in range(9)]
    c = [0 if i % 2 else (-1) ** (i // 2) / fact[i] for i in range(9)]
    np.testing.assert_allclose(x.sin().coeffs, s, atol=1e-16)
    np.testing.assert_allclose(x.cos().coeffs, c, atol=1e-16)


def test_sqrt_binomial_series():
    x = Jet.variable(0.0, 10)
    r = (1 + x).sqrt()
    np.testing.assert_allclose(r.coeffs.real, [binom(0.5, j) for j in range(11)], atol=1e-15)


def test_sqrt_rejects_branch_cut_and_zero():
    x = Jet.variable(0.0, 4)
    with pytest.raises(EvaluationError):
        (x - 1).sqrt()
    with pytest.raises(EvaluationError):
        x.sqrt()


def test_negative_power():
    x = Jet.variable(2.0, 5)
    r = x ** -2
    # d^j/du^j u^-2 / j! at 2 = (-1)^j (j + 1) 2^-(j+2)
    np.testing.assert_allclose(r.coeffs.real, [(-1) ** j * (j + 1) / 2 ** (j + 2) for j in range(6)])


def test_division_roundtrip():
    rng = np.random.default_rng(7)
    a = Jet(0.3, rng.normal(size=8) + 1j * rng.normal(size=8))
    b = Jet(0.3, rng.normal(size=8) + 1j * rng.normal(size=8))
    np.testing.assert_allclose((jet_div(a, b) * b).coeffs, a.coeffs, atol=1e-12)


def test_mixed_order_truncates():
    a = Jet(0.0, [1, 2, 3, 4])
    b = Jet(0.0, [1, 1])
    assert (a + b).order == 1
    assert (a * b).order == 1
