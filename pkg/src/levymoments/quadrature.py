"""Adaptive quadrature helpers for power-law weighted integrals.

All integrals here have the form  int_a^b y^(s-1) g(y) dy  with g smooth and
0 <= a < b <= inf.  The algebraic singularity at y = 0 is handled by the QAWS
rule (weight='alg') so it never enters the adaptive error estimate.
"""

import math
import warnings

import numpy as np
from scipy import integrate

EPSABS = 1e-10
EPSREL = 1e-12
LIMIT = 500


def _quad(f, a, b, **kw):
    kw.setdefault("epsabs", EPSABS)
    kw.setdefault("epsrel", EPSREL)
    kw.setdefault("limit", LIMIT)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _err = integrate.quad(f, a, b, **kw)
    return val


def power_integral(s, g, a, b):
    """int_a^b y^(s-1) g(y) dy for a >= 0; caller guarantees convergence."""
    if b <= a:
        return 0.0
    total = 0.0
    if a < 1.0:
        # singular piece on [a, min(b, 1)] via QAWS with weight (y-a)^0 ...
        top = min(b, 1.0)
        if a == 0.0:
            total += _quad(g, 0.0, top, weight="alg", wvar=(s - 1.0, 0.0))
        else:
            total += _quad(lambda y: y ** (s - 1.0) * g(y), a, top)
        a = top
    if b > a:
        total += _quad(lambda y: y ** (s - 1.0) * g(y), a, b)
    return total


def oscillatory_integral(s, g, a, b, xi, kind):
    """int_a^b y^(s-1) g(y) w(xi y) dy with w = cos or sin (b may be inf)."""
    if b <= a or xi == 0.0 and kind == "sin":
        return 0.0
    if xi == 0.0:
        return power_integral(s, g, a, b)
    w = math.cos if kind == "cos" else math.sin
    total = 0.0
    if a == 0.0:
        top = min(b, 1.0, 1.0 / abs(xi))
        total += _quad(lambda y: g(y) * w(xi * y), 0.0, top, weight="alg", wvar=(s - 1.0, 0.0))
        a = top
    if b <= a:
        return total
    h = lambda y: y ** (s - 1.0) * g(y)
    if math.isinf(b):
        total += _quad(h, a, np.inf, weight=kind, wvar=xi)
    else:
        total += _quad(h, a, b, weight=kind, wvar=xi)
    return total


def plain(f, a, b, points=None):
    """Plain adaptive quadrature with the package tolerances."""
    if points is not None and math.isfinite(a) and math.isfinite(b):
        pts = [p for p in points if a < p < b]
        return _quad(f, a, b, points=pts or None)
    return _quad(f, a, b)
