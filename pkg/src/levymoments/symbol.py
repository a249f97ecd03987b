"""Levy-Khintchine symbol q(x, xi), its xi-derivatives and generalized BG indices.

Sign convention:

    q(x, xi) = -i b(x) xi + Q(x) xi^2 / 2
               + int (1 - e^{i y xi} + i y xi 1_{(0,1]}(|y|)) N(x, dy)

with the drift converted to this standard convention whatever compensation
the kernel declares.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import hermite_e
from scipy import special

from . import quadrature
from .errors import GrowthHypothesisFailure, MomentDoesNotExist
from .triplet import search_interval, stable_density_constant

MAX_DERIVATIVE_ORDER = 8
BG_TOL = 0.05
_ALPHA_ONE_BAND = 1e-4


@dataclass(frozen=True)
class SymbolValue:
    x: float
    xi: float
    value: complex
    method: str  # "ClosedForm" or "Quadrature"


@dataclass(frozen=True)
class DerivativeReport:
    x: float
    order: int
    xi: float
    value: complex


@dataclass(frozen=True)
class BGIndexEstimate:
    x: float
    beta0: float
    beta_inf: float
    window_0: tuple
    window_inf: tuple
    residual_0: float
    residual_inf: float
    poor_fit: bool
    log_r: tuple = field(repr=False, default=())
    log_g: tuple = field(repr=False, default=())

    def to_dict(self):
        return {
            "x": self.x, "beta0": self.beta0, "beta_inf": self.beta_inf,
            "window_0": list(self.window_0), "window_inf": list(self.window_inf),
            "residual_0": self.residual_0, "residual_inf": self.residual_inf,
            "poor_fit": self.poor_fit,
        }


@dataclass(frozen=True)
class GrowthFit:
    order: int
    c: float
    witness: float
    grid_points: int


# -- closed-form pieces -------------------------------------------------------

def _one_minus_exp_i(a, b):
    """1 - exp(a + i b) without cancellation for small arguments."""
    em = np.expm1(a)
    re = -(em * np.cos(b) - 2.0 * np.sin(b / 2.0) ** 2)
    im = -(np.exp(a) * np.sin(b))
    return re + 1j * im


def _one_minus_sinc(u):
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-2
    safe = np.where(small, 1.0, u)
    big = 1.0 - np.sin(safe) / safe
    u2 = u * u
    series = u2 / 6.0 - u2 ** 2 / 120.0 + u2 ** 3 / 5040.0 - u2 ** 4 / 362880.0
    return np.where(small, series, big)


def _needs_quadrature(kernel, order):
    if kernel.truncate is not None:
        return np.ones(np.shape(order), dtype=bool)
    if kernel.family == "TemperedStable":
        return (np.abs(order - 1.0) < _ALPHA_ONE_BAND) & (order != 1.0)
    return np.zeros(np.shape(order), dtype=bool)


def _jump_closed(kernel, pv, xi):
    """Jump part in the standard convention; NaN where no closed form exists."""
    fam = kernel.family
    if fam == "None":
        return np.zeros(np.shape(xi), dtype=complex)
    axi = np.abs(xi)
    if fam == "SymmetricStable":
        alpha = pv["order"]
        if kernel.normalized:
            s = pv["scale"]
        else:
            s = pv["scale"] / stable_density_constant(alpha)
        val = s * axi ** alpha
        return np.where(_needs_quadrature(kernel, alpha), np.nan, val).astype(complex)
    if fam == "TemperedStable":
        alpha, c, lam = pv["order"], pv["scale"], pv["tempering"]
        with np.errstate(all="ignore"):
            z = special.expm1(alpha * special.log1p(-1j * axi / lam))
            gen = -2.0 * c * special.gamma(-alpha) * lam ** alpha * z.real
            one = 2.0 * c * (axi * np.arctan(axi / lam) - 0.5 * lam * np.log1p((axi / lam) ** 2))
        val = np.where(alpha == 1.0, one, gen)
        val = np.where(xi == 0.0, 0.0, val)
        return np.where(_needs_quadrature(kernel, alpha), np.nan, val).astype(complex)
    rate = pv["rate"]
    law = kernel.law
    if law == "TwoPoint":
        return (rate * 2.0 * np.sin(pv["a"] * xi / 2.0) ** 2).astype(complex)
    if law == "Uniform":
        return (rate * _one_minus_sinc(pv["a"] * xi)).astype(complex)
    mu, sig = pv["mu"], pv["sigma"]
    val = rate * _one_minus_exp_i(-0.5 * sig ** 2 * xi ** 2, mu * xi)
    if not kernel.symmetric:
        lo, hi = (-1.0 - mu) / sig, (1.0 - mu) / sig
        phi = lambda z: np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        m_in = rate * (mu * (special.ndtr(hi) - special.ndtr(lo)) + sig * (phi(lo) - phi(hi)))
        val = val + 1j * xi * m_in
    return val


def _small_y_kernel(xi, lam):
    """(1 - cos(y xi)) / y^2 * e^{-lam y}, smooth at y = 0."""
    def h(y):
        u = y * xi
        if abs(u) < 1e-4:
            core = xi * xi * (0.5 - u * u / 24.0)
        else:
            core = 2.0 * math.sin(u / 2.0) ** 2 / (y * y)
        return core * math.exp(-lam * y)
    return h


def _jump_quadrature(kernel, pv, xi):
    """Jump part at one (x, xi) by adaptive quadrature; pv holds scalars."""
    fam = kernel.family
    if fam == "None" or xi == 0.0:
        return 0.0 + 0.0j
    if fam in ("SymmetricStable", "TemperedStable"):
        alpha = pv["order"]
        c = float(kernel.density_coefficient(pv))
        lam = pv.get("tempering", 0.0)
        R = kernel.radius
        y0 = min(R, 1.0, 1.0 / abs(xi))
        g = lambda y: math.exp(-lam * y)
        # (1 - cos) = y^2 * smooth near 0: QAWS with weight y^(1 - alpha)
        near = quadrature._quad(_small_y_kernel(xi, lam), 0.0, y0, weight="alg", wvar=(1.0 - alpha, 0.0))
        far = 0.0
        if R > y0:
            far = quadrature.power_integral(-alpha, g, y0, R) - quadrature.oscillatory_integral(
                -alpha, g, y0, R, xi, "cos")
        return complex(2.0 * c * (near + far), 0.0)
    rate = pv["rate"]
    law = kernel.law
    if law == "TwoPoint":
        a = pv["a"]
        return complex(rate * (1.0 - math.cos(a * xi)), 0.0)
    if law == "Uniform":
        a = pv["a"]
        re = quadrature.plain(lambda y: 1.0 - math.cos(y * xi), -a, a) / (2 * a)
        return complex(rate * re, 0.0)
    mu, sig = pv["mu"], pv["sigma"]
    dens = lambda y: math.exp(-0.5 * ((y - mu) / sig) ** 2) / (sig * math.sqrt(2 * math.pi))
    lo, hi = mu - 40 * sig, mu + 40 * sig
    pts = [p for p in (-1.0, 1.0, mu) if lo < p < hi]
    re = quadrature.plain(lambda y: (1.0 - math.cos(y * xi)) * dens(y), lo, hi, points=pts)
    im = quadrature.plain(
        lambda y: (-math.sin(y * xi) + (y * xi if abs(y) <= 1.0 else 0.0)) * dens(y), lo, hi, points=pts)
    return complex(rate * re, rate * im)


def symbol(spec, x, xi, method="auto"):
    """Vectorized q(x, xi) (broadcast over x and xi); complex ndarray."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x, xi = np.broadcast_arrays(x, xi)
    shape = x.shape
    x, xi = np.atleast_1d(x), np.atleast_1d(xi)
    b = spec.standard_drift(x)
    Q = spec.diffusion(x)
    kernel = spec.kernel
    pv = kernel.params_at(x)
    if method == "quadrature":
        jump = np.full(x.shape, np.nan, dtype=complex)
    else:
        jump = np.asarray(_jump_closed(kernel, pv, xi), dtype=complex)
        jump = np.broadcast_to(jump, x.shape).copy()
    todo = np.isnan(jump.real)
    if np.any(todo):
        for idx in zip(*np.nonzero(todo)):
            p = {k: float(v[idx]) for k, v in pv.items()}
            jump[idx] = _jump_quadrature(kernel, p, float(xi[idx]))
    out = -1j * b * xi + 0.5 * Q * xi * xi + jump
    out = np.where(xi == 0.0, 0.0 + 0.0j, out)
    return out.reshape(shape)


def eval_symbol(spec, x, xi, method="auto"):
    """q(x, xi) at one point as a :class:`SymbolValue`.

    ``method='auto'`` uses the closed form when the family has one and falls
    back to quadrature; ``'quadrature'`` forces the integral route.
    """
    x, xi = float(x), float(xi)
    val = symbol(spec, x, xi, method=method)
    used = "Quadrature"
    if method != "quadrature":
        pv = spec.kernel.params_at(np.asarray(x))
        closed = _jump_closed(spec.kernel, pv, np.asarray(xi))
        if not np.isnan(np.asarray(closed).real).any():
            used = "ClosedForm"
    return SymbolValue(x=x, xi=xi, value=complex(val), method=used)


# -- derivatives -------------------------------------------------------------

def _gauss_moment_cf(k, mu, sig, xi):
    """E[J^k e^{i xi J}] for J ~ N(mu, sig^2)."""
    u = sig * xi
    tot = 0.0 + 0.0j
    for j in range(k + 1):
        coef = np.zeros(j + 1)
        coef[j] = 1.0
        ez = (1j ** j) * hermite_e.hermeval(u, coef) * math.exp(-0.5 * u * u)
        tot += math.comb(k, j) * mu ** (k - j) * sig ** j * ez
    return tot * np.exp(1j * xi * mu)


def jump_moment_transform(kernel, x, k, xi):
    """int y^k e^{i y xi} N(x, dy) at one state (k >= 2, or k = 1 for finite measures)."""
    pv = {n: float(v) for n, v in kernel.params_at(np.asarray(float(x))).items()}
    fam = kernel.family
    if fam == "None":
        return 0.0 + 0.0j
    if fam == "CompoundPoisson":
        rate = pv["rate"]
        if kernel.law == "TwoPoint":
            a = pv["a"]
            return rate * 0.5 * (a ** k * np.exp(1j * a * xi) + (-a) ** k * np.exp(-1j * a * xi))
        if kernel.law == "Gaussian":
            return rate * _gauss_moment_cf(k, pv["mu"], pv["sigma"], xi)
        a = pv["a"]
        if k % 2 == 0:
            re = quadrature.plain(lambda y: y ** k * math.cos(y * xi), 0.0, a) / a
            return complex(rate * re, 0.0)
        im = quadrature.plain(lambda y: y ** k * math.sin(y * xi), 0.0, a) / a
        return complex(0.0, rate * im)
    alpha = pv["order"]
    c = float(kernel.density_coefficient(pv))
    lam = pv.get("tempering", 0.0)
    s = k - alpha
    if kernel.truncate is None and fam == "TemperedStable":
        val = c * special.gamma(s) * ((lam - 1j * xi) ** (-s) + (-1) ** k * (lam + 1j * xi) ** (-s))
        return complex(val)
    g = lambda y: math.exp(-lam * y)
    kind = "cos" if k % 2 == 0 else "sin"
    if kind == "cos":
        return complex(2.0 * c * quadrature.oscillatory_integral(s, g, 0.0, kernel.radius, xi, "cos"), 0.0)
    return complex(0.0, 2.0 * c * _sin_integral(s, g, kernel.radius, xi))


def _sin_integral(s, g, R, xi):
    """int_0^R y^(s-1) g(y) sin(xi y) dy for s > -1 (sin(xi y)/y absorbs one power)."""
    if xi == 0.0:
        return 0.0
    top = min(R, 1.0, 1.0 / abs(xi))

    def h(y):
        u = xi * y
        sinc = xi * (1.0 - u * u / 6.0) if abs(u) < 1e-4 else math.sin(u) / y
        return g(y) * sinc

    total = quadrature._quad(h, 0.0, top, weight="alg", wvar=(s, 0.0))
    if R > top:
        total += quadrature.oscillatory_integral(s, g, top, R, xi, "sin")
    return total


def _symmetric_first(kernel, x, xi):
    """int y sin(y xi) N(x, dy) for symmetric infinite-activity kernels."""
    pv = {n: float(v) for n, v in kernel.params_at(np.asarray(float(x))).items()}
    alpha = pv["order"]
    if xi == 0.0:
        return 0.0
    if kernel.family == "SymmetricStable" and kernel.truncate is None:
        s = pv["scale"] if kernel.normalized else pv["scale"] / float(stable_density_constant(alpha))
        return s * alpha * abs(xi) ** (alpha - 1.0) * math.copysign(1.0, xi)
    c = float(kernel.density_coefficient(pv))
    lam = pv.get("tempering", 0.0)
    if kernel.truncate is None:
        sexp = 1.0 - alpha
        if sexp == 0.0:
            return 2.0 * c * math.atan(xi / lam)
        return 2.0 * c * special.gamma(sexp) * (lam * lam + xi * xi) ** (-sexp / 2) * math.sin(
            sexp * math.atan(xi / lam))
    return 2.0 * c * _sin_integral(1.0 - alpha, lambda y: math.exp(-lam * y), kernel.radius, xi)


def symbol_derivative(spec, x, k, xi=0.0):
    """k-th xi-derivative of q(x, .) at xi via the moment formulas.

    k = 1:  -i b + Q xi + i int (1_{(0,1]}(|y|) - e^{i y xi}) y N(x, dy)
    k = 2:  Q + int y^2 e^{i y xi} N(x, dy)
    k >= 3: i^(k+2) int y^k e^{i y xi} N(x, dy)

    Raises :class:`MomentDoesNotExist` when int_{|y|>1} |y|^k N(x, dy) = inf.
    """
    if not 1 <= int(k) <= MAX_DERIVATIVE_ORDER or int(k) != k:
        raise ValueError(f"derivative order must be an integer in 1..{MAX_DERIVATIVE_ORDER}")
    k = int(k)
    x, xi = float(x), float(xi)
    kernel = spec.kernel
    outer = float(kernel.fractional_moment(x, float(k), "Outer"))
    if math.isinf(outer):
        raise MomentDoesNotExist(
            f"int_(|y|>1) |y|^{k} N(x, dy) = inf at x={x:g}: q(x, .) is not {k} times differentiable")
    b = float(spec.standard_drift(x))
    Q = float(spec.diffusion(x))
    if k == 1:
        if kernel.family == "CompoundPoisson":
            m_in = float(kernel.first_moment(x, "Inner"))
            jump = 1j * m_in - 1j * jump_moment_transform(kernel, x, 1, xi)
        elif kernel.family == "None":
            jump = 0.0
        else:
            jump = _symmetric_first(kernel, x, xi)
        val = -1j * b + Q * xi + jump
    elif k == 2:
        val = Q + jump_moment_transform(kernel, x, 2, xi)
    else:
        val = (1j ** (k + 2)) * jump_moment_transform(kernel, x, k, xi)
    return DerivativeReport(x=x, order=k, xi=xi, value=complex(val))


def derivative_at_zero(spec, xs, k):
    """|d^k q(x, 0)| on an array of states (vectorized where possible)."""
    xs = np.asarray(xs, dtype=float)
    kernel = spec.kernel
    if k % 2 == 0 and kernel.symmetric:
        mom = kernel.fractional_moment(xs, float(k), "All")
        extra = spec.diffusion(xs) if k == 2 else 0.0
        return np.abs(extra + mom)
    if k == 1:
        return np.abs(spec.standard_drift(xs) + kernel.first_moment(xs, "Outer"))
    if kernel.symmetric:
        return np.zeros_like(xs)
    return np.array([abs(symbol_derivative(spec, x, k).value) for x in xs])


def growth_constants(spec, k, region=None, grid_points=2001):
    """c_k = sup |d^k q(x, 0)| / (1 + |x|^k) over the region, with witness.

    On the whole line the grid is complemented by far probes (|x| = 1e3, 1e6);
    a ratio still rising there is reported as a failed growth hypothesis.
    """
    lo, hi = search_interval(spec, region)
    xs = np.linspace(lo, hi, grid_points)
    if region is None:
        xs = np.concatenate([xs, [-1e6, -1e3, 1e3, 1e6]])
    for x0 in xs[:1]:
        outer = float(spec.kernel.fractional_moment(x0, float(k), "Outer"))
        if math.isinf(outer):
            raise MomentDoesNotExist(f"k={k} moment of the kernel is infinite")
    ratio = derivative_at_zero(spec, xs, k) / (1.0 + np.abs(xs) ** k)
    if np.any(~np.isfinite(ratio)):
        i = int(np.flatnonzero(~np.isfinite(ratio))[0])
        raise MomentDoesNotExist(f"k={k} derivative infinite at x={xs[i]:g}")
    if region is None:
        far = derivative_at_zero(spec, np.array([1e3, 1e6, -1e3, -1e6]), k) / (1.0 + np.array([1e3, 1e6] * 2) ** k)
        if far[1] > 1.5 * far[0] or far[3] > 1.5 * far[2]:
            raise GrowthHypothesisFailure(
                f"|d^{k} q(x,0)| / (1+|x|^{k}) keeps growing: {far[0]:.3g} at 1e3, {far[1]:.3g} at 1e6")
    i = int(np.argmax(ratio))
    return GrowthFit(order=int(k), c=float(ratio[i]), witness=float(xs[i]), grid_points=int(xs.size))


# -- Blumenthal-Getoor indices ----------------------------------------------

def _local_sup(spec, x, r, n_ball, n_freq):
    if spec.is_constant:
        ys = np.array([x])
    else:
        ys = np.unique(np.concatenate([np.linspace(x - 1.0 / r, x + 1.0 / r, n_ball), [x]]))
    etas = np.linspace(0.0, r, n_freq)
    vals = np.abs(symbol(spec, ys[:, None], etas[None, :]))
    return float(vals.max())


def bg_sup_curve(spec, x, exponents, n_ball=256, n_freq=256):
    """g(r) = sup_{|y-x|<=1/r} sup_{|eta|<=r} |q(y, eta)| at r = 2^j."""
    return np.array([_local_sup(spec, x, 2.0 ** j, n_ball, n_freq) for j in exponents])


def _slope(logr, logg):
    A = np.vstack([logr, np.ones_like(logr)]).T
    coef, *_ = np.linalg.lstsq(A, logg, rcond=None)
    resid = logg - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def bg_index(spec, x, window_0=(-14, -8), window_inf=(8, 14), n_ball=256, n_freq=256,
             fit_threshold=BG_TOL):
    """Generalized Blumenthal-Getoor indices at 0 and infinity by log-log slopes."""
    x = float(x)
    j0 = np.arange(window_0[0], window_0[1] + 1)
    j1 = np.arange(window_inf[0], window_inf[1] + 1)
    js = np.concatenate([j0, j1])
    g = bg_sup_curve(spec, x, js, n_ball, n_freq)
    logr = js * math.log(2.0)
    if np.all(g == 0.0):
        return BGIndexEstimate(x, 0.0, 0.0, tuple(window_0), tuple(window_inf), 0.0, 0.0, False,
                               tuple(logr), tuple(np.full_like(logr, -np.inf)))
    with np.errstate(divide="ignore"):
        logg = np.log(g)
    n0 = j0.size
    b0, r0 = _slope(logr[:n0], logg[:n0])
    b1, r1 = _slope(logr[n0:], logg[n0:])
    poor = bool(r0 > fit_threshold or r1 > fit_threshold)
    return BGIndexEstimate(x=x, beta0=b0, beta_inf=b1, window_0=tuple(window_0), window_inf=tuple(window_inf),
                           residual_0=r0, residual_inf=r1, poor_fit=poor,
                           log_r=tuple(logr), log_g=tuple(logg))


# -- export --------------------------------------------------------------------

def symbol_table(spec, x, xis):
    vals = symbol(spec, float(x), np.asarray(xis, dtype=float))
    return [(float(xi), float(v.real), float(v.imag)) for xi, v in zip(np.asarray(xis, dtype=float), vals)]


def write_symbol_csv(fh, spec, x, xis, header_lines=()):
    for line in header_lines:
        fh.write(f"# {line}\n")
    w = csv.writer(fh)
    w.writerow(["xi", "re_q", "im_q"])
    for row in symbol_table(spec, x, xis):
        w.writerow([repr(v) for v in row])
