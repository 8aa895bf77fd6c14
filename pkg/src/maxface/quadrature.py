"""Adaptive Gauss-Legendre quadrature along straight segments in C.

All endpoints of a batch share the parametrisation ``w = a + s (z - a)``,
``s in [0, 1]``, so panels are refined in ``s`` and only the points whose
estimate has not converged are re-evaluated.
"""

import numpy as np

from .errors import QuadratureError

NODES, WEIGHTS = np.polynomial.legendre.leggauss(15)

DEFAULT_TOL = 1e-10
MAX_DEPTH = 40


def _panel(func, start, delta, s0, s1):
    """15-point rule on [s0, s1] for each endpoint; returns (ncomp, npts)."""
    half = 0.5 * (s1 - s0)
    s = s0 + half * (NODES + 1.0)
    w = start + delta[:, None] * s[None, :]
    vals = np.asarray(func(w.ravel()), dtype=complex)
    vals = vals.reshape(vals.shape[0], delta.size, NODES.size)
    return half * delta[None, :] * (vals @ WEIGHTS)


def integrate_segments(func, start, ends, tol=DEFAULT_TOL, max_depth=MAX_DEPTH):
    """Integrate ``func`` from ``start`` to each of ``ends`` along straight lines.

    ``func`` maps a 1-d complex array of nodes to an array of shape
    ``(ncomp, nodes)``.  Each panel is accepted when the 15-point rule and
    the sum over its two halves agree to ``tol * panel_length`` in every
    component, so the absolute error target per component is ``tol``.
    Returns a complex array ``(ncomp, len(ends))``.
    """
    ends = np.atleast_1d(np.asarray(ends, dtype=complex))
    delta = ends - start
    first = _panel(func, start, delta, 0.0, 1.0)
    total = np.zeros(first.shape, dtype=complex)
    stack = [(0.0, 1.0, np.arange(ends.size), first, 0)]
    while stack:
        s0, s1, idx, coarse, depth = stack.pop()
        mid = 0.5 * (s0 + s1)
        left = _panel(func, start, delta[idx], s0, mid)
        right = _panel(func, start, delta[idx], mid, s1)
        fine = left + right
        if not np.all(np.isfinite(fine)):
            comp = int(np.argwhere(~np.isfinite(fine))[0, 0])
            raise QuadratureError(
                f"non-finite integrand in component {comp}", component=comp)
        err = np.abs(fine - coarse)
        bound = np.maximum(tol * (s1 - s0), 64 * np.finfo(float).eps * np.abs(fine))
        ok_comp = err <= bound
        ok = np.all(ok_comp, axis=0)
        total[:, idx[ok]] += fine[:, ok]
        if np.all(ok):
            continue
        if depth >= max_depth:
            comp = int(np.argwhere(~ok_comp)[0, 0])
            raise QuadratureError(
                f"adaptive quadrature did not converge in component {comp} "
                "(singularity on or near the path?)", component=comp)
        bad = ~ok
        stack.append((mid, s1, idx[bad], right[:, bad], depth + 1))
        stack.append((s0, mid, idx[bad], left[:, bad], depth + 1))
    return total


def integrate_segment(func, start, end, tol=DEFAULT_TOL):
    return integrate_segments(func, start, [end], tol)[:, 0]
