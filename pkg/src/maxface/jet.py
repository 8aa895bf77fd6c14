"""Truncated Taylor jets with complex coefficients.

A :class:`Jet` of order ``k`` at ``base`` stores ``c_0 .. c_k`` with
``c_j = f^(j)(base) / j!``.  Arithmetic propagates truncated series, so a
jet built by evaluating an expression tree on the identity jet carries
every derivative up to order ``k`` at once.

Division strips common leading zeros before dividing, which is what lets
quotients like ``(g1' + i g2') / g3'`` be evaluated at a point where both
numerator and denominator vanish.
"""

import numbers

import numpy as np

from .errors import EvaluationError, PoleError

#: Zero policy for jet coefficients: relative to the jet's largest
#: coefficient, with an absolute floor.
ZERO_REL = 1e-9
ZERO_ABS = 1e-12


def _zero_threshold(coeffs):
    scale = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
    return max(ZERO_ABS, ZERO_REL * scale)


class Jet:
    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def constant(cls, value, base, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(base, c)

    @classmethod
    def variable(cls, base, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = base
        if order >= 1:
            c[1] = 1.0
        return cls(base, c)

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return complex(self.coeffs[0])

    def deriv(self, j):
        """The j-th derivative of the represented function at ``base``."""
        if j > self.order:
            raise IndexError(f"jet of order {self.order} has no derivative {j}")
        return complex(self.coeffs[j]) * float(np.prod(np.arange(1, j + 1)))

    def truncate(self, order):
        return Jet(self.base, self.coeffs[: order + 1])

    def derivative(self):
        """Jet of f' (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        j = np.arange(1, self.order + 1)
        return Jet(self.base, self.coeffs[1:] * j)

    def leading_zeros(self):
        thr = _zero_threshold(self.coeffs)
        nz = np.flatnonzero(np.abs(self.coeffs) >= thr)
        return int(nz[0]) if nz.size else self.coeffs.size

    def is_zero(self):
        return self.leading_zeros() == self.coeffs.size

    def real(self):
        return Jet(self.base, self.coeffs.real)

    def imag(self):
        return Jet(self.base, self.coeffs.imag)

    def conj(self):
        return Jet(self.base, self.coeffs.conj())

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            k = min(self.order, other.order)
            return self.coeffs[: k + 1], other.coeffs[: k + 1]
        if isinstance(other, numbers.Number):
            o = np.zeros_like(self.coeffs)
            o[0] = other
            return self.coeffs, o
        return NotImplemented

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        return Jet(self.base, pair[0] + pair[1])

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        return Jet(self.base, pair[0] - pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        return Jet(self.base, pair[1] - pair[0])

    def __neg__(self):
        return Jet(self.base, -self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Jet(self.base, self.coeffs * other)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        return Jet(self.base, np.convolve(a, b)[: a.size])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            if other == 0:
                raise EvaluationError("division of a jet by zero")
            return Jet(self.base, self.coeffs / other)
        if isinstance(other, Jet):
            return jet_div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return jet_div(Jet.constant(other, self.base, self.order), self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            raise TypeError("jets support integer powers only")
        if n < 0:
            return jet_div(Jet.constant(1.0, self.base, self.order), self ** (-n))
        result = Jet.constant(1.0, self.base, self.order)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    # -- elementary functions ---------------------------------------------

    def exp(self):
        a = self.coeffs
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        for j in range(1, a.size):
            i = np.arange(1, j + 1)
            e[j] = np.sum(i * a[i] * e[j - i]) / j
        return Jet(self.base, e)

    def sin_cos(self):
        a = self.coeffs
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
        for j in range(1, a.size):
            i = np.arange(1, j + 1)
            s[j] = np.sum(i * a[i] * c[j - i]) / j
            c[j] = -np.sum(i * a[i] * s[j - i]) / j
        return Jet(self.base, s), Jet(self.base, c)

    def sin(self):
        return self.sin_cos()[0]

    def cos(self):
        return self.sin_cos()[1]

    def sqrt(self):
        # principal branch; the radicand must sit off the cut (-inf, 0]
        a = self.coeffs
        a0 = a[0]
        thr = _zero_threshold(a)
        if abs(a0) < thr:
            raise EvaluationError("sqrt of a jet with vanishing leading coefficient")
        if a0.real < 0 and abs(a0.imag) <= 1e-14 * abs(a0.real):
            raise EvaluationError("sqrt jet base value lies on the negative real axis")
        r = np.zeros_like(a)
        r[0] = np.sqrt(a0)
        for j in range(1, a.size):
            i = np.arange(1, j)
            r[j] = (a[j] - np.sum(r[i] * r[j - i])) / (2 * r[0])
        return Jet(self.base, r)

    def __repr__(self):
        return f"Jet(base={self.base!r}, coeffs={self.coeffs.tolist()!r})"


def jet_mul(a, b):
    return a * b


def jet_div(a, b):
    """Quotient jet with removable-singularity reduction.

    ``m`` leading zeros common to both operands are stripped first, so the
    result has order ``min(a.order, b.order) - m``.  A divisor that is zero
    to its full order, or that vanishes to higher order than ``a``, raises
    :class:`PoleError`.
    """
    k = min(a.order, b.order)
    ac, bc = a.coeffs[: k + 1], b.coeffs[: k + 1]
    mb = Jet(b.base, bc).leading_zeros()
    if mb > k:
        raise PoleError("divisor jet is identically zero to working order")
    if mb:
        ma = Jet(a.base, ac).leading_zeros()
        if ma < mb:
            raise PoleError(
                f"quotient has a pole of order {mb - ma} at {b.base!r}")
        ac, bc = ac[mb:], bc[mb:]
    q = np.zeros(ac.size, dtype=complex)
    b0 = bc[0]
    for j in range(ac.size):
        i = np.arange(1, j + 1)
        q[j] = (ac[j] - np.sum(bc[i] * q[j - i])) / b0
    return Jet(a.base, q)
