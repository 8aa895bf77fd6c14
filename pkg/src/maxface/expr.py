"""Analytic expressions in one real variable.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = ("+" | "-") unary | power ;
    power    = atom [ "^" exponent ] ;
    exponent = [ "-" ] INTEGER | "(" [ "-" ] INTEGER ")" ;
    atom     = NUMBER | VARIABLE | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC     = "sin" | "cos" | "exp" | "sqrt" ;
    VARIABLE = "u" | "t" ;
    NUMBER   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;

``u`` and ``t`` name the same variable.  Numbers are kept exactly as
:class:`fractions.Fraction`.  ``-u^2`` parses as ``-(u^2)``.

Trees are immutable, hashable dataclasses and support the usual Python
operators, which is how derived curves are assembled programmatically.
"""

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
import numbers
import re

import numpy as np

from .errors import (EvaluationError, ExprSyntaxError, NonIntegerExponent,
                     OrderOverflow, UnknownIdentifier)
from .jet import Jet

FUNCTIONS = ("sin", "cos", "exp", "sqrt")
VARIABLES = ("u", "t")
MAX_JET_ORDER = 16

#: |denominator| at or below this is treated as a division by zero.
DIV_EPS = 1e-300


class Node:
    """Base class of the expression tree."""

    def _wrap(self, other):
        if isinstance(other, Node):
            return other
        if isinstance(other, numbers.Rational):
            return Num(Fraction(other))
        if isinstance(other, float):
            return Num(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Add(self, o)

    def __radd__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Add(o, self)

    def __sub__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Sub(self, o)

    def __rsub__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Sub(o, self)

    def __mul__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Mul(self, o)

    def __rmul__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Mul(o, self)

    def __truediv__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Div(self, o)

    def __rtruediv__(self, other):
        o = self._wrap(other)
        return o if o is NotImplemented else Div(o, self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            raise TypeError("only integer exponents are supported")
        return Pow(self, int(n))

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, eq=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Var(Node):
    pass


@dataclass(frozen=True, eq=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True, eq=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True, eq=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True, eq=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True, eq=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True, eq=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True, eq=True)
class Func(Node):
    name: str
    arg: Node


AnalyticExpr = Node
ZERO = Num(Fraction(0))
ONE = Num(Fraction(1))


# -- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            what = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            arg = self.unary()
            return Neg(arg) if val == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        kind, val, pos = self.peek()
        paren = val == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind == "end":
            raise ExprSyntaxError("missing exponent", pos)
        if kind != "num" or not val.isdigit():
            raise NonIntegerExponent(f"exponent must be an integer literal, got {val!r}", pos)
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(Fraction(Decimal(val)))
        if kind == "name":
            if val in VARIABLES:
                return Var()
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(val, arg)
            raise UnknownIdentifier(f"unknown identifier {val!r}", pos)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse_expr(text):
    """Parse ``text`` into an expression tree.

    >>> parse_expr("u - u^3/3")
    Sub(left=Var(), right=Div(left=Pow(base=Var(), exponent=3), right=Num(value=Fraction(3, 1))))
    """
    return _Parser(text).parse()


# -- printing -----------------------------------------------------------

def _num_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        # terminating decimal: print exactly so it re-parses to the same value
        e = 0
        while (10 ** e) % q.denominator:
            e += 1
        digits = str(q.numerator * 10 ** e // q.denominator).rjust(e + 1, "0")
        return f"{digits[:-e]}.{digits[-e:]}"
    return f"({q.numerator}/{q.denominator})"


_BINOPS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def to_string(node):
    """Fully parenthesised text that re-parses to an equal tree.

    Exact for trees produced by :func:`parse_expr`; a literal with a
    non-terminating decimal expansion prints as a quotient.
    """
    if isinstance(node, Num):
        if node.value < 0:
            return f"(-{_num_str(-node.value)})"
        return _num_str(node.value)
    if isinstance(node, Var):
        return "u"
    if isinstance(node, Neg):
        return f"(-{to_string(node.arg)})"
    if isinstance(node, Pow):
        return f"({to_string(node.base)}^({node.exponent}))"
    if isinstance(node, Func):
        return f"{node.name}({to_string(node.arg)})"
    op = _BINOPS[type(node)]
    return f"({to_string(node.left)} {op} {to_string(node.right)})"


# -- evaluation -----------------------------------------------------------

def _check_div(den):
    if np.any(np.abs(den) <= DIV_EPS):
        raise EvaluationError("division by (near-)zero")


def _check_sqrt(arg):
    a = np.asarray(arg)
    bad = (a.real < 0) & (np.abs(a.imag) <= 1e-14 * np.abs(a.real))
    if np.any(bad):
        raise EvaluationError("sqrt argument on the branch cut (negative real axis)")


_NUMPY_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt}


def _evaluate(node, x, cache):
    key = id(node)
    hit = cache.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(node, Num):
        val = complex(node.value) if not isinstance(x, Jet) else \
            Jet.constant(float(node.value), x.base, x.order)
    elif isinstance(node, Var):
        val = x
    elif isinstance(node, Neg):
        val = -_evaluate(node.arg, x, cache)
    elif isinstance(node, Add):
        val = _evaluate(node.left, x, cache) + _evaluate(node.right, x, cache)
    elif isinstance(node, Sub):
        val = _evaluate(node.left, x, cache) - _evaluate(node.right, x, cache)
    elif isinstance(node, Mul):
        val = _evaluate(node.left, x, cache) * _evaluate(node.right, x, cache)
    elif isinstance(node, Div):
        num = _evaluate(node.left, x, cache)
        den = _evaluate(node.right, x, cache)
        if not isinstance(den, Jet):
            _check_div(den)
        val = num / den
    elif isinstance(node, Pow):
        b = _evaluate(node.base, x, cache)
        if node.exponent < 0 and not isinstance(b, Jet):
            _check_div(b)
        val = b ** node.exponent
    elif isinstance(node, Func):
        a = _evaluate(node.arg, x, cache)
        if isinstance(a, Jet):
            val = getattr(a, node.name)()
        else:
            if node.name == "sqrt":
                _check_sqrt(a)
            val = _NUMPY_FUNCS[node.name](a)
    else:
        raise TypeError(f"not an expression node: {node!r}")
    # keep node alive so its id stays unique for this evaluation
    cache[key] = (node, val)
    return val


def eval_complex(e, z):
    """Evaluate ``e`` at complex ``z`` (scalar or numpy array).

    Raises :class:`EvaluationError` on division by zero or when a sqrt
    argument lands on the negative real axis.
    """
    arr = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        val = _evaluate(e, arr, {})
    out = np.broadcast_to(np.asarray(val, dtype=complex), arr.shape)
    if out.ndim == 0:
        return complex(out)
    return np.array(out)


def eval_real(e, u):
    """Evaluate at real ``u`` and return the real part."""
    val = eval_complex(e, np.asarray(u, dtype=float))
    return np.real(val) if np.ndim(val) else float(np.real(val))


def jet_at(e, u0, k=MAX_JET_ORDER, max_order=MAX_JET_ORDER):
    """Taylor jet of ``e`` of order ``k`` at ``u0``.

    Coefficient ``j`` is ``f^(j)(u0)/j!``.  Removable singularities of
    quotients are reduced, which can lower the order of the result.
    """
    if k > max_order:
        raise OrderOverflow(f"jet order {k} exceeds the maximum {max_order}")
    if k < 0:
        raise ValueError("jet order must be non-negative")
    x = Jet.variable(u0, k)
    return _evaluate(e, x, {})


# -- differentiation ------------------------------------------------------

def _is_num(node, value=None):
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a, b):
    if _is_num(a, 0):
        return b
    if _is_num(b, 0):
        return a
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    return Add(a, b)


def _sub(a, b):
    if _is_num(b, 0):
        return a
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    if _is_num(a, 0):
        return Neg(b)
    return Sub(a, b)


def _mul(a, b):
    if _is_num(a, 0) or _is_num(b, 0):
        return ZERO
    if _is_num(a, 1):
        return b
    if _is_num(b, 1):
        return a
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    return Mul(a, b)


def _neg(a):
    if _is_num(a):
        return Num(-a.value)
    return Neg(a)


def diff(e):
    """Derivative tree of ``e`` with respect to the variable.

    Only trivial 0/1 folding is applied.
    """
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return _neg(diff(e.arg))
    if isinstance(e, Add):
        return _add(diff(e.left), diff(e.right))
    if isinstance(e, Sub):
        return _sub(diff(e.left), diff(e.right))
    if isinstance(e, Mul):
        return _add(_mul(diff(e.left), e.right), _mul(e.left, diff(e.right)))
    if isinstance(e, Div):
        da, db = diff(e.left), diff(e.right)
        if _is_num(db, 0):
            return Div(da, e.right) if not _is_num(da, 0) else ZERO
        return Div(_sub(_mul(da, e.right), _mul(e.left, db)), Pow(e.right, 2))
    if isinstance(e, Pow):
        n = e.exponent
        if n == 0:
            return ZERO
        inner = diff(e.base)
        power = ONE if n == 1 else (e.base if n == 2 else Pow(e.base, n - 1))
        return _mul(_mul(Num(Fraction(n)), power), inner)
    if isinstance(e, Func):
        inner = diff(e.arg)
        if _is_num(inner, 0):
            return ZERO
        if e.name == "sin":
            outer = Func("cos", e.arg)
        elif e.name == "cos":
            outer = Neg(Func("sin", e.arg))
        elif e.name == "exp":
            outer = e
        else:
            return Div(inner, Mul(Num(Fraction(2)), e))
        return _mul(outer, inner)
    raise TypeError(f"not an expression node: {e!r}")


def is_constant_zero(e):
    return isinstance(e, Num) and e.value == 0


def as_expr(value):
    """Coerce a string, number or tree to an expression tree."""
    if isinstance(value, Node):
        return value
    if isinstance(value, str):
        return parse_expr(value)
    if isinstance(value, (numbers.Rational, float)):
        return Num(Fraction(value))
    raise TypeError(f"cannot interpret {value!r} as an expression")
