"""Singularity types on the singular interval, decided two ways.

* from the data {gamma, L}: vanishing pattern of gamma', gamma'', gamma''',
  L, L', L'' and of the pairings D(g'_12, g''_12), D(L_12, L'_12);
* from the Weierstrass data: real/imaginary parts of alpha, beta, eta
  computed by jet arithmetic on g and f.

:func:`scan_interval` runs both and records whether they agree.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import enum
import math

import numpy as np

from .bjorling import gauss_map_jet, weierstrass_f
from .errors import DataError, DegenerateGaussMap, MaxfaceError, PoleError
from .jet import jet_div

ABE_ORDER = 8
DATA_ORDER = 6


class SingularityType(enum.Enum):
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    CUSPIDAL_BUTTERFLY = "CuspidalButterfly"
    CUSPIDAL_CROSSCAPS = "CuspidalCrosscaps"
    CUSPIDAL_S1_MINUS = "CuspidalS1Minus"
    SHRINKING = "Shrinking"
    FOLDED = "Folded"
    UNCLASSIFIED = "Unclassified"

    def __str__(self):
        return self.value

    @property
    def is_cusp(self):
        return self in CUSP_TYPES


CUSP_TYPES = frozenset({
    SingularityType.CUSPIDAL_EDGE, SingularityType.SWALLOWTAIL,
    SingularityType.CUSPIDAL_BUTTERFLY, SingularityType.CUSPIDAL_CROSSCAPS,
    SingularityType.CUSPIDAL_S1_MINUS,
})


@dataclass(frozen=True)
class ToleranceSpec:
    """``x == 0`` means ``|x| < max(abs, rel * scale)``."""

    rel: float = 1e-7
    abs: float = 1e-10

    def threshold(self, scale):
        return max(self.abs, self.rel * scale)

    def is_zero(self, x, scale):
        return abs(x) < self.threshold(scale)


DEFAULT_TOL = ToleranceSpec()


def pairing_D(a, b):
    """``a1 b2 - a2 b1``."""
    return a[0] * b[1] - a[1] * b[0]


@dataclass
class Witnesses:
    u: float
    norm_gamma_p: float
    norm_L: float
    norm_gamma_pp: float
    norm_gamma_ppp: float
    norm_L_p: float
    norm_L_pp: float
    D_gamma: float
    D_L: float
    gamma3_p: float
    L3: float
    d_p: float = math.nan
    d_pp: float = math.nan
    c_or_d: float = math.nan
    alpha: complex = complex(math.nan, math.nan)
    beta: complex = complex(math.nan, math.nan)
    eta: complex = complex(math.nan, math.nan)

    @property
    def scale(self):
        return max(self.norm_gamma_p, self.norm_L, self.norm_gamma_pp, self.norm_gamma_ppp,
                   self.norm_L_p, self.norm_L_pp, abs(self.D_gamma), abs(self.D_L))


def witnesses(data, u, k=DATA_ORDER):
    """Derivative norms and pairings of {gamma, L} at ``u``."""
    jg, jL = data.jets(u, k)
    gp = np.array([j.deriv(0) for j in jg]).real
    gpp = np.array([j.deriv(1) for j in jg]).real
    gppp = np.array([j.deriv(2) for j in jg]).real
    L = np.array([j.deriv(0) for j in jL]).real
    Lp = np.array([j.deriv(1) for j in jL]).real
    Lpp = np.array([j.deriv(2) for j in jL]).real
    w = Witnesses(
        u=float(u),
        norm_gamma_p=float(np.linalg.norm(gp)), norm_L=float(np.linalg.norm(L)),
        norm_gamma_pp=float(np.linalg.norm(gpp)), norm_gamma_ppp=float(np.linalg.norm(gppp)),
        norm_L_p=float(np.linalg.norm(Lp)), norm_L_pp=float(np.linalg.norm(Lpp)),
        D_gamma=float(pairing_D(gp[:2], gpp[:2])), D_L=float(pairing_D(L[:2], Lp[:2])),
        gamma3_p=float(gp[2]), L3=float(L[2]),
    )
    # proportionality factor: gamma' = d L where L != 0, L = c gamma' otherwise
    if not jL[2].is_zero():
        try:
            d = jet_div(jg[2], jL[2])
            w.d_p = d.deriv(1).real
            w.d_pp = d.deriv(2).real
        except PoleError:
            pass
    if abs(w.gamma3_p) >= abs(w.L3) and w.gamma3_p != 0:
        w.c_or_d = w.L3 / w.gamma3_p
    elif w.L3 != 0:
        w.c_or_d = w.gamma3_p / w.L3
    return w


def _cascade_data(w, tol):
    s = w.scale
    z = lambda x: tol.is_zero(x, s)  # noqa: E731
    T = SingularityType
    gp0, L0 = z(w.norm_gamma_p), z(w.norm_L)
    if gp0 and L0:
        return T.UNCLASSIFIED, "gamma' and L vanish together"
    if not gp0 and not L0:
        if z(w.D_gamma) and z(w.D_L):
            return T.UNCLASSIFIED, "D_gamma = D_L = 0"
        return T.CUSPIDAL_EDGE, ""
    if gp0:
        if z(w.D_L):
            return T.UNCLASSIFIED, "gamma' = 0 and D_L = 0"
        gpp0 = z(w.norm_gamma_pp)
        if not math.isnan(w.d_p) and gpp0 != z(w.d_p):
            return T.UNCLASSIFIED, "gamma'' and d' disagree on vanishing"
        if not gpp0:
            return T.SWALLOWTAIL, ""
        if z(w.norm_gamma_ppp):
            return T.UNCLASSIFIED, "gamma' = gamma'' = gamma''' = 0"
        return T.CUSPIDAL_BUTTERFLY, ""
    if z(w.D_gamma):
        return T.UNCLASSIFIED, "L = 0 and D_gamma = 0"
    if not z(w.norm_L_p):
        return T.CUSPIDAL_CROSSCAPS, ""
    if not z(w.norm_L_pp):
        return T.CUSPIDAL_S1_MINUS, ""
    return T.UNCLASSIFIED, "L = L' = L'' = 0"


def classify_by_data(data, u, tol=DEFAULT_TOL, *, explain=False):
    """Singularity type at ``u`` from the vanishing pattern of {gamma, L}.

    With ``explain=True`` returns ``(type, reason)``; the reason is empty
    unless the point is unclassified.
    """
    if not data.contains(u):
        raise DataError(f"u={u} outside interval {data.interval}")
    kind, reason = _cascade_data(witnesses(data, u), tol)
    return (kind, reason) if explain else kind


def alpha_beta_eta(data, u, k=ABE_ORDER, f_scale=1.0):
    """``alpha = g'/(g^2 f)``, ``beta = (g/g') alpha'``, ``eta = (g/g') beta'`` at ``u``."""
    g = gauss_map_jet(data, u, k)
    f = weierstrass_f(data, u, k, scale=f_scale)
    gp = g.derivative()
    if gp.is_zero():
        raise DegenerateGaussMap(f"g' vanishes to order {gp.order} at u={u}")
    alpha = jet_div(gp, g * g * f)
    ratio = jet_div(g, gp)
    beta = ratio * alpha.derivative()
    eta = ratio * beta.derivative()
    return alpha.value, beta.value, eta.value


def alpha_closed_form_gamma(w):
    """alpha where gamma' != 0, in terms of gamma'_3, L_3 and D_gamma."""
    g3, L3, D = w.gamma3_p, w.L3, w.D_gamma
    den = g3 ** 2 + L3 ** 2
    return complex(-L3 * D / (den * g3 ** 2), D / (den * g3))


def alpha_closed_form_L(w):
    """alpha where L != 0, in terms of gamma'_3, L_3 and D_L."""
    g3, L3, D = w.gamma3_p, w.L3, w.D_L
    den = g3 ** 2 + L3 ** 2
    return complex(-D / (den * L3), g3 * D / (den * L3 ** 2))


def _cascade_abe(abe, tol):
    alpha, beta, eta = abe
    s = max(abs(alpha), abs(beta), abs(eta))
    z = lambda x: tol.is_zero(x, s)  # noqa: E731
    T = SingularityType
    ra, ia = not z(alpha.real), not z(alpha.imag)
    if ra and ia:
        return T.CUSPIDAL_EDGE, ""
    if ra:
        if not z(beta.real):
            return T.SWALLOWTAIL, ""
        if not z(eta.imag):
            return T.CUSPIDAL_BUTTERFLY, ""
        return T.UNCLASSIFIED, "Im alpha = Re beta = Im eta = 0"
    if ia:
        if not z(beta.imag):
            return T.CUSPIDAL_CROSSCAPS, ""
        if not z(eta.real):
            return T.CUSPIDAL_S1_MINUS, ""
        return T.UNCLASSIFIED, "Re alpha = Im beta = Re eta = 0"
    return T.UNCLASSIFIED, "alpha = 0"


def classify_by_abe(abe, tol=DEFAULT_TOL, *, explain=False):
    """Singularity type from ``(alpha, beta, eta)``.

    All three are tested against one scale, the largest of their moduli.
    """
    kind, reason = _cascade_abe(tuple(complex(x) for x in abe), tol)
    return (kind, reason) if explain else kind


@dataclass
class SingularityReport:
    u: float
    type: SingularityType
    witnesses: Witnesses
    agreement: bool
    by_data: SingularityType
    by_abe: SingularityType
    reason: str = ""
    located: bool = False

    def to_row(self):
        w = self.witnesses
        return {
            "u": self.u, "type": self.type.value, "by_data": self.by_data.value,
            "by_abe": self.by_abe.value, "agreement": self.agreement,
            "located_root": self.located,
            "norm_gamma_p": w.norm_gamma_p, "norm_L": w.norm_L,
            "norm_gamma_pp": w.norm_gamma_pp, "norm_gamma_ppp": w.norm_gamma_ppp,
            "norm_L_p": w.norm_L_p, "norm_L_pp": w.norm_L_pp,
            "D_gamma": w.D_gamma, "D_L": w.D_L, "c_or_d": w.c_or_d,
            "alpha_re": w.alpha.real, "alpha_im": w.alpha.imag,
            "beta_re": w.beta.real, "beta_im": w.beta.imag,
            "eta_re": w.eta.real, "eta_im": w.eta.imag,
            "reason": self.reason,
        }


def report_at(data, u, tol=DEFAULT_TOL, f_scale=1.0):
    """Classify ``u`` by both routes and combine them into one report."""
    w = witnesses(data, u)
    by_data, why_data = _cascade_data(w, tol)
    try:
        abe = alpha_beta_eta(data, u, f_scale=f_scale)
        w.alpha, w.beta, w.eta = abe
        by_abe, why_abe = _cascade_abe(abe, tol)
    except (MaxfaceError, ZeroDivisionError, FloatingPointError) as exc:
        by_abe, why_abe = SingularityType.UNCLASSIFIED, f"alpha/beta/eta failed: {exc}"
    agree = by_data == by_abe
    if agree:
        kind = by_data
        reason = why_data or why_abe
    else:
        kind = SingularityType.UNCLASSIFIED
        reason = f"route disagreement: data={by_data.value}, abe={by_abe.value}"
    return SingularityReport(float(u), kind, w, agree, by_data, by_abe, reason)


def golden_section_min(f, a, b, xtol=1e-13, maxiter=200):
    """Minimiser of a unimodal ``f`` on ``[a, b]``."""
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def _norm_fn(components):
    from .expr import eval_real

    def f(u):
        return float(np.sqrt(sum(eval_real(c, u) ** 2 for c in components)))
    return f


def locate_zeros(components, grid_u, tol=DEFAULT_TOL):
    """Zeros of ``|v(u)|`` bracketed by local minima on the grid."""
    f = _norm_fn(components)
    vals = np.array([f(u) for u in grid_u])
    scale = float(np.max(vals)) if vals.size else 0.0
    roots = []
    for i in range(1, len(grid_u) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            r = golden_section_min(f, grid_u[i - 1], grid_u[i + 1])
            if tol.is_zero(f(r), scale) and not any(abs(r - q) < 1e-8 for q in roots):
                roots.append(float(r))
    return roots


def _identically_zero(components, grid_u, tol):
    f = _norm_fn(components)
    return all(tol.is_zero(f(u), 1.0) for u in grid_u)


def _report_worker(args):
    data, u, tol, f_scale = args
    return report_at(data, u, tol, f_scale)


def scan_interval(data, grid=101, tol=DEFAULT_TOL, *, interval=None, extra_points=(),
                  f_scale=1.0, jobs=1):
    """Reports at interior grid points, located zeros of |gamma'| and |L|,
    and any ``extra_points``, sorted by ``u``.

    Interval-level labels: if gamma' vanishes on the whole grid every report
    is ``Shrinking``; if L does, ``Folded``.
    """
    a, b = interval if interval is not None else data.interval
    us = np.linspace(a, b, grid + 2)[1:-1]
    shrinking = _identically_zero(data.gamma_prime, us, tol)
    folded = _identically_zero(data.L, us, tol)

    points = [(float(u), False) for u in us]
    if not (shrinking or folded):
        roots = (locate_zeros(data.gamma_prime, us, tol) + locate_zeros(data.L, us, tol))
        roots = sorted(set(roots))
        points = [p for p in points if all(abs(p[0] - r) > 1e-9 for r in roots)]
        points += [(r, True) for r in roots]
    for u in extra_points:
        points = [p for p in points if abs(p[0] - u) > 1e-9]
        points.append((float(u), False))
    points.sort()

    tasks = [(data, u, tol, f_scale) for u, _ in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_report_worker, tasks, chunksize=8))
    else:
        reports = [_report_worker(t) for t in tasks]
    for rep, (_, located) in zip(reports, points):
        rep.located = located
        if shrinking or folded:
            label = SingularityType.SHRINKING if shrinking else SingularityType.FOLDED
            rep.reason = rep.reason or label.value
            rep.type = label
    return reports
