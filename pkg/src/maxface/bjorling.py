"""Singular Björling data and the maxface it generates.

The solution is normalised so that ``X(u0) = 0``::

    X(z) = Re  integral_{u0}^{z} (gamma'(w) - i L(w)) dw

``gamma(u0)`` is kept on the data object for mesh placement only.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from . import quadrature
from .errors import DataError, EvaluationError, PoleError
from .expr import ZERO, as_expr, diff, eval_complex, jet_at
from .jet import jet_div

VALIDATION_TOL = 1e-9
#: validation grid density
SAMPLES_PER_UNIT = 64
MIN_SAMPLES = 32
JET_CHECK_POINTS = 9
JET_CHECK_ORDER = 8


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[c - hu, c + hu] x [-hv, hv]`` (shifted by Im c)."""

    center: complex
    half_u: float
    half_v: float

    @property
    def u_range(self):
        c = complex(self.center)
        return c.real - self.half_u, c.real + self.half_u

    @property
    def v_range(self):
        c = complex(self.center)
        return c.imag - self.half_v, c.imag + self.half_v

    def contains(self, z, strict=False):
        z = complex(z)
        (ua, ub), (va, vb) = self.u_range, self.v_range
        if strict:
            return ua < z.real < ub and va < z.imag < vb
        return ua <= z.real <= ub and va <= z.imag <= vb

    def grid(self, nu, nv):
        """Complex sample points, shape ``(nu, nv)``; index ``[i, j]`` is (u_i, v_j)."""
        us = np.linspace(*self.u_range, nu)
        vs = np.linspace(*self.v_range, nv)
        return us[:, None] + 1j * vs[None, :]


@dataclass(frozen=True)
class BjorlingData:
    """The pair {gamma, L} on an interval, with base point ``base``.

    ``gamma`` may be ``None`` when only ``gamma_prime`` is known; then
    ``gamma_base`` holds ``gamma(base)`` and gamma itself is recovered by
    quadrature.
    """

    gamma_prime: tuple
    L: tuple
    interval: tuple
    base: float
    gamma: tuple = None
    gamma_base: tuple = (0.0, 0.0, 0.0)
    name: str = ""

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise DataError(f"degenerate interval {self.interval!r}")
        if not a <= self.base <= b:
            raise DataError(f"base point {self.base} outside {self.interval!r}")
        if len(self.gamma_prime) != 3 or len(self.L) != 3:
            raise DataError("gamma and L need three components each")

    @classmethod
    def from_curve(cls, gamma, L, interval, base, name=""):
        g = tuple(as_expr(c) for c in gamma)
        gb = tuple(float(np.real(eval_complex(c, float(base)))) for c in g)
        return cls(tuple(diff(c) for c in g), tuple(as_expr(c) for c in L),
                   tuple(map(float, interval)), float(base),
                   gamma=g, gamma_base=gb, name=name)

    @classmethod
    def from_derivative(cls, gamma_prime, L, interval, base, gamma_base=(0.0, 0.0, 0.0), name=""):
        return cls(tuple(as_expr(c) for c in gamma_prime), tuple(as_expr(c) for c in L),
                   tuple(map(float, interval)), float(base),
                   gamma_base=tuple(map(float, gamma_base)), name=name)

    @classmethod
    def zero_curve(cls, L, interval, base, name=""):
        return cls.from_curve((ZERO, ZERO, ZERO), L, interval, base, name=name)

    def with_base(self, u0):
        gb = tuple(self.gamma_at(u0))
        return BjorlingData(self.gamma_prime, self.L, self.interval, float(u0),
                            gamma=self.gamma, gamma_base=gb, name=self.name)

    @property
    def length(self):
        return self.interval[1] - self.interval[0]

    def contains(self, u):
        return self.interval[0] <= u <= self.interval[1]

    # -- evaluation --------------------------------------------------------

    def gamma_prime_at(self, z):
        """gamma'(z), complex array of shape ``(3,) + shape(z)``."""
        return np.array([eval_complex(c, z) for c in self.gamma_prime])

    def L_at(self, z):
        return np.array([eval_complex(c, z) for c in self.L])

    def gamma_at(self, u):
        """gamma(u) for real ``u`` (closed form when available)."""
        if self.gamma is not None:
            return np.array([float(np.real(eval_complex(c, u))) for c in self.gamma])
        if u == self.base:
            return np.array(self.gamma_base)
        integral = quadrature.integrate_segment(self.gamma_prime_at, self.base, u)
        return np.array(self.gamma_base) + integral.real

    def jets(self, u, k):
        """Jets of order ``k`` at ``u`` for the components of gamma' and L."""
        return ([jet_at(c, u, k) for c in self.gamma_prime],
                [jet_at(c, u, k) for c in self.L])


# -- validation -------------------------------------------------------------

def _lorentz(a, b):
    return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]


@dataclass
class ValidationReport:
    residuals: dict
    tolerance: float
    samples: int
    valid: bool
    messages: list = field(default_factory=list)

    def to_dict(self):
        return {"valid": self.valid, "samples": self.samples,
                "tolerance": self.tolerance,
                "residuals": {k: float(v) for k, v in self.residuals.items()},
                "messages": list(self.messages)}


def default_samples(data):
    return max(MIN_SAMPLES, int(math.ceil(SAMPLES_PER_UNIT * data.length)))


def validate(data, samples=None):
    """Check nullity, proportionality and the no-common-zero condition.

    Residuals are maxima over an interior sample grid of the interval;
    nullity is additionally checked on jets of order 8 at 9 points.  The
    data is valid iff every residual is below ``1e-9`` scaled by
    ``max(1, |gamma'|^2, |L|^2)``.
    """
    if samples is None:
        samples = default_samples(data)
    if samples < 16:
        raise ValueError("validation needs at least 16 samples")
    a, b = data.interval
    u = np.linspace(a, b, samples + 2)[1:-1]
    msgs = []
    try:
        gp = data.gamma_prime_at(u).real
        L = data.L_at(u).real
    except EvaluationError as exc:
        return ValidationReport({}, VALIDATION_TOL, samples, False,
                                [f"evaluation failed: {exc}"])
    ngp = np.linalg.norm(gp, axis=0)
    nL = np.linalg.norm(L, axis=0)
    scale = max(1.0, float(np.max(ngp)) ** 2, float(np.max(nL)) ** 2)
    tol = VALIDATION_TOL * scale

    res = {
        "nullity_gamma": float(np.max(np.abs(_lorentz(gp, gp)))),
        "nullity_L": float(np.max(np.abs(_lorentz(L, L)))),
        "proportionality": float(np.max(np.abs(np.cross(gp.T, L.T)))),
    }
    jet_null_gp = jet_null_L = 0.0
    for u0 in np.linspace(a, b, JET_CHECK_POINTS + 2)[1:-1]:
        try:
            jg, jL = data.jets(float(u0), JET_CHECK_ORDER)
        except (EvaluationError, PoleError) as exc:
            msgs.append(f"jet evaluation failed at u={u0:.6g}: {exc}")
            jet_null_gp = jet_null_L = math.inf
            break
        jet_null_gp = max(jet_null_gp, float(np.max(np.abs(_lorentz(jg, jg).coeffs))))
        jet_null_L = max(jet_null_L, float(np.max(np.abs(_lorentz(jL, jL).coeffs))))
    res["nullity_gamma_jet"] = jet_null_gp
    res["nullity_L_jet"] = jet_null_L

    valid = True
    for key, val in res.items():
        if not val <= tol:
            valid = False
            msgs.append(f"{key} residual {val:.3e} exceeds {tol:.3e}")
    common = float(np.min(np.maximum(ngp, nL)))
    res["min_max_norm"] = common
    if not common > tol:
        valid = False
        msgs.append(f"gamma' and L vanish together (min max-norm {common:.3e})")
    return ValidationReport(res, tol, samples, valid, msgs)


# -- Weierstrass data ----------------------------------------------------------

def _gauss_map_jet(data, u, k, prefer=None):
    jg, jL = data.jets(u, k)
    pairs = {"gamma": (jg[0] + 1j * jg[1], jg[2]), "L": (jL[0] + 1j * jL[1], jL[2])}
    usable = {name: den for name, (_, den) in pairs.items() if not den.is_zero()}
    if not usable:
        raise DataError(f"both gamma'_3 and L_3 vanish to order {k} at u={u}")
    if prefer in usable:
        branch = prefer
    else:
        # Dividing by a jet with a small leading coefficient amplifies
        # roundoff like |c0|^-j, so take the denominator that is best
        # conditioned at u: fewest leading zeros, then largest leading term.
        def key(name):
            den = usable[name]
            m = den.leading_zeros()
            return (m, -abs(den.coeffs[m]))
        branch = min(usable, key=key)
    num, den = pairs[branch]
    return jet_div(num, den), branch


def gauss_map_jet(data, u, k=16, prefer=None):
    """Jet of the Gauss map g at ``u``.

    g is ``(g1' + i g2') / g3'`` or ``(L1 + i L2) / L3``; the two agree
    wherever both are defined.  By default the branch with the better
    conditioned denominator at ``u`` is used; ``prefer="gamma"`` or
    ``prefer="L"`` forces one when it is usable.
    """
    return _gauss_map_jet(data, u, k, prefer)[0]


def gauss_map_branch(data, u, k=16):
    return _gauss_map_jet(data, u, k)[1]


def gauss_map_jets_both(data, u, k=16):
    """Both branches of g at ``u`` (``None`` where a branch is unusable)."""
    jg, jL = data.jets(u, k)
    out = []
    for num, den in ((jg[0] + 1j * jg[1], jg[2]), (jL[0] + 1j * jL[1], jL[2])):
        try:
            out.append(jet_div(num, den))
        except PoleError:
            out.append(None)
    return tuple(out)


def weierstrass_f(data, u, k=16, scale=1.0):
    """Jet of ``f = (g1' - i L1) - i (g2' - i L2)`` at ``u``."""
    jg, jL = data.jets(u, k)
    f = (jg[0] - 1j * jL[0]) - 1j * (jg[1] - 1j * jL[1])
    return f * scale if scale != 1.0 else f


@dataclass(frozen=True)
class WeierstrassData:
    """Evaluable Gauss map and ``f`` of a maxface, on complex arguments.

    The Gauss map uses, pointwise, whichever of the two quotients has the
    larger denominator; ``branch`` reports the choice.
    """

    data: BjorlingData

    def g(self, z):
        return self.g_with_branch(z)[0]

    def g_with_branch(self, z):
        gp = self.data.gamma_prime_at(z)
        L = self.data.L_at(z)
        use_gamma = np.abs(gp[2]) >= np.abs(L[2])
        num = np.where(use_gamma, gp[0] + 1j * gp[1], L[0] + 1j * L[1])
        den = np.where(use_gamma, gp[2], L[2])
        if np.any(np.abs(den) <= 1e-300):
            raise EvaluationError("Gauss map undefined: gamma'_3 and L_3 both vanish")
        branch = np.where(use_gamma, "gamma", "L")
        return num / den, branch

    def f(self, z):
        gp = self.data.gamma_prime_at(z)
        L = self.data.L_at(z)
        return (gp[0] - 1j * L[0]) - 1j * (gp[1] - 1j * L[1])


def weierstrass_data(data):
    return WeierstrassData(data)


# -- solver --------------------------------------------------------------------

def _integrand(data):
    def func(w):
        return data.gamma_prime_at(w) - 1j * data.L_at(w)
    return func


def solve_many(data, zs, tol=quadrature.DEFAULT_TOL):
    """X at each of ``zs``; returns real array of shape ``shape(zs) + (3,)``."""
    zs = np.asarray(zs, dtype=complex)
    flat = zs.ravel()
    vals = quadrature.integrate_segments(_integrand(data), data.base, flat, tol)
    return vals.real.T.reshape(zs.shape + (3,))


def solve(data, z, tol=quadrature.DEFAULT_TOL):
    """The maxface point ``X(z)`` with ``X(u0) = 0``."""
    return solve_many(data, [z], tol)[0]


def reconstruct_many(data, zs, tol=quadrature.DEFAULT_TOL):
    wd = WeierstrassData(data)

    def phi(w):
        g = wd.g(w)
        f = wd.f(w)
        return np.array([(1 + g ** 2) * f, 1j * (1 - g ** 2) * f, -2 * g * f])

    zs = np.asarray(zs, dtype=complex)
    vals = quadrature.integrate_segments(phi, data.base, zs.ravel(), tol)
    return vals.real.T.reshape(zs.shape + (3,))


def reconstruct_from_weierstrass(data, z, tol=quadrature.DEFAULT_TOL):
    """``Re integral Phi`` with ``Phi = (1 + g^2, i(1 - g^2), -2g) f dz``.

    Agrees with ``(2 X1, 2 X2, -2 X3)`` of :func:`solve`.
    """
    return reconstruct_many(data, [z], tol)[0]


def default_domain(data, clip=None):
    """Square centred on the midpoint of I with half-width ``1.2 |I| / 2``."""
    a, b = data.interval
    r = 1.2 * (b - a) / 2
    if clip is not None:
        r = min(r, clip)
    return Rect(0.5 * (a + b), r, r)


def check_g_nonunimodular(data, domain=None, grid=(21, 21), tol=1e-6):
    """True iff ``| |g| - 1 |`` exceeds ``tol`` somewhere off the real axis."""
    if domain is None:
        domain = default_domain(data)
    z = domain.grid(*grid).ravel()
    z = z[np.abs(z.imag) > 1e-12]
    g = WeierstrassData(data).g(z)
    return bool(np.max(np.abs(np.abs(g) - 1.0)) > tol)


class MaxfaceSolution:
    """``X`` over a rectangular domain with cached grid values."""

    def __init__(self, data, domain=None, grid=(41, 41), tol=quadrature.DEFAULT_TOL):
        self.data = data
        self.domain = domain if domain is not None else default_domain(data)
        self.grid_shape = tuple(grid)
        self.tol = tol

    def __call__(self, z):
        return solve(self.data, z, self.tol)

    def evaluate(self, zs):
        return solve_many(self.data, zs, self.tol)

    @cached_property
    def points(self):
        return self.domain.grid(*self.grid_shape)

    @cached_property
    def values(self):
        """X on the grid, shape ``(nu, nv, 3)``."""
        return self.evaluate(self.points)
