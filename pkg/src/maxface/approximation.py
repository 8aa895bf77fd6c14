"""Sequences of cuspidal-edge maxfaces converging to a given maxface.

Three constructions, all producing Björling data ``{delta_n, mu_n}`` whose
maxface has a cuspidal edge at ``t0``:

* gamma-based, when ``gamma'(t0) != 0`` and ``D_gamma(t0) != 0``::

      delta_n' = gamma' + (1/n, 1/n, h_n),   mu_n = (c + 1/n) delta_n',
      h_n = -g3' + sqrt(g3'^2 + 2 (1/n^2 + (g1' + g2')/n)),  c = L3 / g3'

* L-based, when ``L(t0) != 0`` and ``D_L(t0) != 0``, with the roles of
  gamma' and L exchanged (``d = g3' / L3``, ``g_n`` built like ``h_n``);
* the shrinking family ``L_n = (1 - 1/n) L``, ``gamma_n' = L_n / n`` for
  data with ``gamma' = 0``.

The square-root term makes the perturbed vector null exactly:
``(x1 + 1/n)^2 + (x2 + 1/n)^2 - (x3 + h)^2 = 0``.
"""

from dataclasses import dataclass, field
import enum
from fractions import Fraction
import math

import numpy as np

from .bjorling import BjorlingData, MaxfaceSolution, Rect, validate
from .errors import ApproximationError, DataError
from .expr import Func, Neg, Num, eval_complex, eval_real
from .singularity import DEFAULT_TOL, report_at, witnesses

#: minimum of the radicand (and of the squared divisor) on the working interval
SAFETY_MARGIN = 1e-6
MAX_THRESHOLD = 10 ** 6
_SAMPLES = 129


class FamilyKind(enum.Enum):
    GAMMA_BASED = "gamma"
    L_BASED = "L"
    SHRINKING_EXAMPLE = "shrinking"


def _frac(n):
    return Num(Fraction(1, n))


def _null_lift(vec, inv_n):
    """Third-component correction making ``vec + (1/n, 1/n, h)`` null."""
    x1, x2, x3 = vec
    radicand = x3 ** 2 + 2 * (inv_n * inv_n + (x1 + x2) * inv_n)
    return Neg(x3) + Func("sqrt", radicand)


def _flip_third(data):
    gp = (data.gamma_prime[0], data.gamma_prime[1], Neg(data.gamma_prime[2]))
    L = (data.L[0], data.L[1], Neg(data.L[2]))
    gamma = None
    if data.gamma is not None:
        gamma = (data.gamma[0], data.gamma[1], Neg(data.gamma[2]))
    gb = (data.gamma_base[0], data.gamma_base[1], -data.gamma_base[2])
    return BjorlingData(gp, L, data.interval, data.base, gamma=gamma, gamma_base=gb,
                        name=data.name)


def _radicand_min(x1, x2, x3, inv_n_max):
    """Min over samples and over 0 < 1/n <= inv_n_max of the radicand."""
    s = x1 + x2
    x = np.clip(-s / 2, 0.0, inv_n_max)
    return float(np.min(x3 ** 2 + 2 * x * x + 2 * s * x))


@dataclass
class ApproxFamily:
    """A sequence of Björling data indexed by ``n > threshold``.

    ``parent`` is the target data in the coordinates the members are built
    in (third axis negated when ``flipped``) and based at ``t0``.
    """

    kind: FamilyKind
    parent: BjorlingData
    t0: float
    threshold: int
    interval: tuple
    flipped: bool = False
    members: dict = field(default_factory=dict)

    def member(self, n):
        if n <= self.threshold:
            raise ApproximationError(
                f"n={n} is not above the family threshold N={self.threshold}")
        if n not in self.members:
            self.members[n] = self._build(n)
        return self.members[n]

    def _build(self, n):
        p = self.parent
        inv = _frac(n)
        if self.kind is FamilyKind.SHRINKING_EXAMPLE:
            Ln = tuple((1 - inv) * c for c in p.L)
            gpn = tuple(inv * c for c in Ln)
        elif self.kind is FamilyKind.GAMMA_BASED:
            gp = p.gamma_prime
            h = _null_lift(gp, inv)
            gpn = (gp[0] + inv, gp[1] + inv, gp[2] + h)
            c = p.L[2] / gp[2]
            Ln = tuple((c + inv) * x for x in gpn)
        else:
            L = p.L
            g = _null_lift(L, inv)
            Ln = (L[0] + inv, L[1] + inv, L[2] + g)
            d = p.gamma_prime[2] / L[2]
            gpn = tuple((d + inv) * x for x in Ln)
        member = BjorlingData(gpn, Ln, self.interval, self.t0,
                              gamma_base=tuple(p.gamma_base),
                              name=f"{p.name or 'data'}[{self.kind.value},n={n}]")
        report = validate(member)
        if not report.valid:
            raise ApproximationError(
                f"member n={n} is not valid Björling data: {'; '.join(report.messages)}")
        return member


def _working_interval(parent, t0, divisor, numerators):
    """Shrink I around t0 until the divisor stays positive with margin.

    Returns the interval and the threshold N.
    """
    a, b = parent.interval
    w = min(t0 - a, b - t0)
    if w <= 0:
        raise ApproximationError(f"t0={t0} must lie inside the interval {parent.interval}")
    for _ in range(60):
        ts = np.linspace(t0 - w, t0 + w, _SAMPLES)
        x3 = eval_real(divisor, ts)
        if np.all(x3 > 0) and np.min(x3) ** 2 > SAFETY_MARGIN:
            break
        w /= 2
    else:
        raise ApproximationError("no working subinterval with a positive divisor")
    x1, x2 = (eval_real(e, ts) for e in numerators)
    if _radicand_min(x1, x2, x3, 1.0) > SAFETY_MARGIN:
        return (t0 - w, t0 + w), 0
    lo, hi = 1, MAX_THRESHOLD
    if _radicand_min(x1, x2, x3, 1.0 / (hi + 1)) <= SAFETY_MARGIN:
        raise ApproximationError("radicand does not stay positive for any n")
    while lo < hi:
        mid = (lo + hi) // 2
        if _radicand_min(x1, x2, x3, 1.0 / (mid + 1)) > SAFETY_MARGIN:
            hi = mid
        else:
            lo = mid + 1
    return (t0 - w, t0 + w), lo


def _factor_threshold(factor_t0):
    """Smallest N such that factor(t0) + 1/n != 0 for every n > N."""
    if factor_t0 >= 0 or factor_t0 == 0:
        return 0
    n_bad = -1.0 / factor_t0
    if abs(n_bad - round(n_bad)) < 1e-9:
        return int(round(n_bad))
    return 0


def gamma_based_family(parent, t0):
    if not parent.contains(t0):
        raise ApproximationError(f"t0={t0} outside {parent.interval}")
    w = witnesses(parent, t0)
    tol = DEFAULT_TOL
    if tol.is_zero(w.norm_gamma_p, w.scale):
        raise ApproximationError(f"gamma'(t0) = 0 at t0={t0}; use the L-based family")
    if tol.is_zero(w.D_gamma, w.scale):
        raise ApproximationError(f"D_gamma(t0) = 0 at t0={t0}")
    flipped = w.gamma3_p < 0
    p = _flip_third(parent) if flipped else parent
    p = p.with_base(t0)
    interval, n_rad = _working_interval(p, t0, p.gamma_prime[2], p.gamma_prime[:2])
    c_t0 = float(np.real(eval_complex(p.L[2] / p.gamma_prime[2], t0)))
    return ApproxFamily(FamilyKind.GAMMA_BASED, p, float(t0),
                        max(n_rad, _factor_threshold(c_t0)), interval, flipped)


def L_based_family(parent, t0):
    if not parent.contains(t0):
        raise ApproximationError(f"t0={t0} outside {parent.interval}")
    w = witnesses(parent, t0)
    tol = DEFAULT_TOL
    if tol.is_zero(w.norm_L, w.scale):
        raise ApproximationError(f"L(t0) = 0 at t0={t0}; use the gamma-based family")
    if tol.is_zero(w.D_L, w.scale):
        raise ApproximationError(f"D_L(t0) = 0 at t0={t0}")
    flipped = w.L3 < 0
    p = _flip_third(parent) if flipped else parent
    p = p.with_base(t0)
    interval, n_rad = _working_interval(p, t0, p.L[2], p.L[:2])
    d_t0 = float(np.real(eval_complex(p.gamma_prime[2] / p.L[2], t0)))
    return ApproxFamily(FamilyKind.L_BASED, p, float(t0),
                        max(n_rad, _factor_threshold(d_t0)), interval, flipped)


def shrinking_family(parent, t0=0.0):
    """``L_n = (1 - 1/n) L``, ``gamma_n' = L_n / n`` for data with gamma' = 0."""
    w = witnesses(parent, t0)
    if not DEFAULT_TOL.is_zero(w.norm_gamma_p, max(w.scale, 1.0)):
        raise ApproximationError("the shrinking family needs gamma' = 0")
    if DEFAULT_TOL.is_zero(w.D_L, w.scale):
        raise ApproximationError(f"D_L(t0) = 0 at t0={t0}")
    return ApproxFamily(FamilyKind.SHRINKING_EXAMPLE, parent.with_base(t0), float(t0), 1,
                        parent.interval)


def make_family(parent, t0, kind=None):
    """Family of the requested kind; ``None`` picks one that applies at t0."""
    if isinstance(kind, str):
        kind = FamilyKind(kind)
    if kind is FamilyKind.GAMMA_BASED:
        return gamma_based_family(parent, t0)
    if kind is FamilyKind.L_BASED:
        return L_based_family(parent, t0)
    if kind is FamilyKind.SHRINKING_EXAMPLE:
        return shrinking_family(parent, t0)
    w = witnesses(parent, t0)
    s = w.scale
    if all(DEFAULT_TOL.is_zero(eval_real(c, u), 1.0) for c in parent.gamma_prime
           for u in np.linspace(*parent.interval, 11)[1:-1]):
        return shrinking_family(parent, t0)
    if not DEFAULT_TOL.is_zero(w.norm_gamma_p, s) and not DEFAULT_TOL.is_zero(w.D_gamma, s):
        return gamma_based_family(parent, t0)
    return L_based_family(parent, t0)


def build_gamma_based(parent, t0, n):
    return gamma_based_family(parent, t0).member(n)


def build_L_based(parent, t0, n):
    return L_based_family(parent, t0).member(n)


def build_shrinking_example(n):
    """Member ``n`` of the explicit family converging to the shrinking preset."""
    if n <= 1:
        raise ApproximationError("the shrinking example needs n > 1")
    from .presets import get_preset
    return shrinking_family(get_preset("shrinking")).member(n)


# -- distances --------------------------------------------------------------------

def sup_norm_distance(A, B, omega=None, grid=None):
    """``max`` over the grid of ``max_k |A_k(z) - B_k(z)|``."""
    omega = omega or A.domain
    grid = tuple(grid or A.grid_shape)
    if A.data.base != B.data.base:
        raise DataError("solutions use different base points")
    for sol in (A, B):
        if sol.domain != omega and not (sol.domain.contains(omega.u_range[0] + 1j * omega.v_range[0])
                                        and sol.domain.contains(omega.u_range[1] + 1j * omega.v_range[1])):
            raise DataError("solution domain does not cover omega")
    pts = omega.grid(*grid)
    xa = A.values if (A.domain == omega and A.grid_shape == grid) else A.evaluate(pts)
    xb = B.values if (B.domain == omega and B.grid_shape == grid) else B.evaluate(pts)
    return float(np.max(np.abs(xa - xb)))


def family_domain(family, n_min, r_max=1.0, grid=(41, 41)):
    """Square around t0 on which every member n >= n_min is analytic.

    Shrinks until the square-root radicand keeps a positive real part and
    the divisor of c (or d) stays away from zero.
    """
    p, t0 = family.parent, family.t0
    a, b = family.interval
    r = min(r_max, t0 - a, b - t0) if family.kind is not FamilyKind.SHRINKING_EXAMPLE \
        else min(r_max, max(t0 - a, b - t0))
    if family.kind is FamilyKind.SHRINKING_EXAMPLE:
        return Rect(t0, r, r)
    vec = p.gamma_prime if family.kind is FamilyKind.GAMMA_BASED else p.L
    inv = 1.0 / n_min
    for _ in range(60):
        z = Rect(t0, r, r).grid(*grid)
        x1, x2, x3 = (eval_complex(e, z) for e in vec)
        ok = np.min(np.abs(x3)) ** 2 > SAFETY_MARGIN
        for s in np.linspace(0.0, inv, 8)[1:]:
            rad = x3 ** 2 + 2 * (s * s + (x1 + x2) * s)
            ok = ok and np.min(rad.real) > SAFETY_MARGIN
        if ok:
            return Rect(t0, r, r)
        r *= 0.8
    raise ApproximationError("no analytic domain found around t0")


@dataclass
class SupNormTable:
    rows: list
    domain: Rect
    grid: tuple
    slope: float = math.nan

    @property
    def distances(self):
        return [d for _, d in self.rows]

    def strictly_decreasing(self):
        d = self.distances
        return all(x > y for x, y in zip(d, d[1:]))


@dataclass
class ConvergenceReport:
    family: ApproxFamily
    table: SupNormTable
    reports: dict


def convergence_report(family, omega=None, ns=(3, 5, 15, 50), grid=(41, 41), tol=DEFAULT_TOL):
    """Sup-norm distances to the parent and the type of each member at t0.

    The log-log slope of distance against n is informational only.
    """
    ns = sorted(ns)
    if omega is None:
        omega = family_domain(family, ns[0], grid=grid)
    parent = MaxfaceSolution(family.parent, omega, grid)
    rows, reports = [], {}
    for n in ns:
        member = family.member(n)
        sol = MaxfaceSolution(member, omega, grid)
        rows.append((n, sup_norm_distance(sol, parent, omega, grid)))
        reports[n] = report_at(member, family.t0, tol)
    slope = math.nan
    if len(rows) >= 2 and all(d > 0 for _, d in rows):
        slope = float(np.polyfit(np.log([n for n, _ in rows]),
                                 np.log([d for _, d in rows]), 1)[0])
    return ConvergenceReport(family, SupNormTable(rows, omega, tuple(grid), slope), reports)
