"""Riemann invariants of the quadratic forward-forward system and their level sets.

With ``s = sqrt(v**2 + m**2)``::

    w1 = s**3 - v**3 + 3 v m**2
    w2 = s**3 + v**3 - 3 v m**2

``grad(w1)`` annihilates ``(v + s, -m)`` and ``grad(w2)`` annihilates
``(s - v, m)``; since the flux Jacobian is symmetric these directions are
``r2`` and ``r1`` respectively, so ``grad(w_i)`` is parallel to ``r_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .models import _s_minus_v, _s_plus_v, _speed, check_density

SCAN_POINTS = 2048


def riemann_invariants(v, m):
    check_density(m)
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    s = _speed(v, m)
    # s**3 -/+ v**3 factored through s -/+ v to avoid cancellation at m << |v|
    smv = _s_minus_v(v, m, s)
    spv = _s_plus_v(v, m, s)
    w1 = smv * (s * s + s * v + v * v) + 3.0 * v * m * m
    w2 = spv * (s * s - s * v + v * v) - 3.0 * v * m * m
    return w1, w2


def riemann_gradients(v, m):
    """``(grad w1, grad w2)``, each as a ``(d/dv, d/dm)`` pair."""
    check_density(m)
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    s = _speed(v, m)
    # 3sv - 3v^2 + 3m^2 = 3v(s - v) + 3m^2, and symmetrically for w2
    g1 = (3.0 * v * _s_minus_v(v, m, s) + 3.0 * m * m, 3.0 * s * m + 6.0 * v * m)
    g2 = (3.0 * v * _s_plus_v(v, m, s) - 3.0 * m * m, 3.0 * s * m - 6.0 * v * m)
    return g1, g2


def pde_residuals(v, m):
    """Residuals of the first-order PDEs defining the two invariants.

    ``rho1 = (v + s) dw1/dv - m dw1/dm`` and ``rho2 = (s - v) dw2/dv + m dw2/dm``;
    both vanish identically.
    """
    (a1, b1), (a2, b2) = riemann_gradients(v, m)
    s = _speed(v, m)
    rho1 = _s_plus_v(v, m, s) * a1 - m * b1
    rho2 = _s_minus_v(v, m, s) * a2 + m * b2
    return rho1, rho2


def residual_scales(v, m):
    """Natural magnitude of each residual: ``s**2 * (|v| + s + m)``.

    ``grad w_i`` is homogeneous of degree 2 and vanishes on the singular set,
    so ``s**2`` rather than ``|grad w_i|`` measures its rounding error.
    """
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    s = _speed(v, m)
    scale = s * s * (np.abs(v) + s + m)
    return scale, scale


@dataclass(frozen=True)
class InvariantDomain:
    """Intersection of sublevel sets ``{w1 <= c1} & {w2 <= c2}``."""

    c1: float
    c2: float

    def contains(self, v, m):
        return domain_contains(self, v, m)


def domain_contains(d: InvariantDomain, v, m):
    w1, w2 = riemann_invariants(v, m)
    out = (w1 <= d.c1) & (w2 <= d.c2)
    return bool(out) if np.ndim(out) == 0 else out


def _invariant(which: int, v, m):
    w1, w2 = riemann_invariants(v, m)
    return w1 if which == 1 else w2


def level_curve_at(which: int, c: float, m: float, v_max: float | None = None,
                   n_scan: int = SCAN_POINTS) -> list[float]:
    """All roots ``v`` of ``w_which(v, m) = c`` in ``[-v_max, v_max]``.

    Sign changes on a uniform scan are refined by Brent's method to full
    precision; scan nodes within ``1e-14 c`` of the level count as roots.
    """
    if v_max is None:
        v_max = np.cbrt(c) + m
    vs = np.linspace(-v_max, v_max, n_scan)
    f_vals = _invariant(which, vs, m) - c
    hit = np.abs(f_vals) <= 1e-14 * c

    def f(x):
        return float(_invariant(which, x, m)) - c

    roots = {i: float(vs[i]) for i in np.flatnonzero(hit)}
    change = np.flatnonzero((np.sign(f_vals[:-1]) * np.sign(f_vals[1:]) < 0) & ~hit[:-1] & ~hit[1:])
    for i in change:
        roots[i] = optimize.brentq(f, vs[i], vs[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)
    return [roots[i] for i in sorted(roots)]


def level_curve(which: int, c: float, m_values, v_max: float | None = None,
                n_scan: int = SCAN_POINTS):
    """Trace the curve ``w_which = c`` as ``(v, m)`` points, one row of roots per ``m``.

    Returns ``(points, gaps)`` where ``gaps`` lists the ``m`` values for which
    no root was found in the scan window.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if not c > 0:
        raise ValueError("level c must be positive")
    points, gaps = [], []
    for m in np.asarray(m_values, dtype=float):
        if not m > 0:
            gaps.append(float(m))
            continue
        roots = level_curve_at(which, c, m, v_max, n_scan)
        if not roots:
            gaps.append(float(m))
        points.extend((v, float(m)) for v in roots)
    return points, gaps
