"""Envelope bounds for E^x sup_{s<=t} |X_s - x|^kappa, moment existence and
grid-based checks of the function conditions used for time independence.

Unnamed constants C are carried symbolically: an envelope's ``value`` sums
only the terms whose prefactor is explicit, while ``shape`` sums all terms
with C = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideGuaranteedRange, RegimeInapplicable, UnsupportedFunction
from .functions import MOMENT_CATALOG, MomentFunction
from .symbol import BG_TOL, bg_index
from .triplet import coefficient_sups, search_interval

REGIMES = (
    "BV_small_beta",
    "BV_mid_beta",
    "PureJump",
    "Martingale",
    "Martingale_heavy",
    "SymbolGrowthSmallTime",
    "SymbolGrowthLargeTime",
)

# t-exponents of each regime as tabulated (a = alpha, b = beta, k = kappa)
TABLE_1 = {
    "BV_small_beta": "t^(k/a)",
    "BV_mid_beta": "t^(k/a) + t^(k/b)",
    "PureJump": "t^(k/a) + t^(k/b)",
    "Martingale": "t^(k/a) + t^(k/b)",
    "Martingale_heavy": "t^(k/a) + t^(k/2)",
    "SymbolGrowthSmallTime": "t^(k/a ^ 1)",
    "SymbolGrowthLargeTime": "t^(k/b)",
}
LOG_CORRECTED = "t |log t|"

# boundary tolerance when comparing kappa with a regression-estimated index
INDEX_SNAP = 0.01


@dataclass(frozen=True)
class Term:
    name: str
    exponent: float
    coefficient: float
    symbolic: bool

    def at(self, t):
        t = np.asarray(t, dtype=float)
        if self.coefficient == 0.0:
            return np.zeros_like(t)
        return self.coefficient * t ** self.exponent

    def to_dict(self):
        return {"name": self.name, "exponent": self.exponent, "coefficient": self.coefficient,
                "symbolic": self.symbolic}


@dataclass(frozen=True)
class EnvelopeBound:
    regime: str
    kappa: float
    alpha: float
    beta: float
    exponent: str
    terms: tuple
    t: np.ndarray
    value: np.ndarray
    shape: np.ndarray
    symbolic_constant: bool
    t_range: tuple
    kappa_range: tuple
    hypotheses: tuple = ()
    drift_used: str = ""
    log_corrected: bool = False

    def to_dict(self):
        return {
            "regime": self.regime, "kappa": self.kappa, "alpha": self.alpha, "beta": self.beta,
            "exponent": self.exponent, "terms": [t.to_dict() for t in self.terms],
            "t_grid": np.atleast_1d(self.t).tolist(), "values": np.atleast_1d(self.value).tolist(),
            "shape": np.atleast_1d(self.shape).tolist(), "symbolic_constant": self.symbolic_constant,
            "t_range": list(self.t_range), "kappa_range": list(self.kappa_range),
            "hypotheses": list(self.hypotheses), "drift_used": self.drift_used,
            "log_corrected": self.log_corrected,
        }


def _check_kappa(kappa, hi, label, open_right=False):
    if kappa < 0 or kappa > hi or (open_right and kappa >= hi):
        bracket = ")" if open_right else "]"
        raise RegimeInapplicable(f"kappa out of range [0,{label}{bracket}: kappa={kappa:g}, {label}={hi:g}")


def _require_finite(value, what):
    if not math.isfinite(value):
        raise RegimeInapplicable(f"{what} = inf")


def _power_term(name, coef, e, symbolic):
    """coef^e as a t^e prefactor (0^0 counts as 0: an absent term)."""
    if coef == 0.0:
        return Term(name, e, 0.0, symbolic)
    return Term(name, e, float(coef) ** e, symbolic)


def envelope(spec, regime, kappa, t, sups=None, alpha=None, beta=None, x=0.0, region=None):
    """Instantiate one tabulated envelope for ``spec``.

    ``alpha``/``beta`` are the outer and inner moment exponents for the
    bounded-coefficient regimes, the growth exponent at infinity for
    ``SymbolGrowthSmallTime`` and the growth exponent at zero for
    ``SymbolGrowthLargeTime``.
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; choose from {REGIMES}")
    kappa = float(kappa)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    if regime.startswith("SymbolGrowth"):
        return _symbol_growth_envelope(spec, regime, kappa, t_arr, alpha, beta, x)

    defaults = {"BV_small_beta": (0.5, 0.5), "BV_mid_beta": (0.5, 1.0), "PureJump": (1.0, 2.0),
                "Martingale": (2.0, 2.0), "Martingale_heavy": (3.0, 2.0)}
    a0, b0 = defaults[regime]
    alpha = float(sups.alpha if alpha is None and sups is not None else (a0 if alpha is None else alpha))
    beta = float(sups.beta if beta is None and sups is not None else (b0 if beta is None else beta))
    if regime == "Martingale_heavy":
        beta = 2.0

    ranges = {
        "BV_small_beta": ((0.0, 1.0), (0.0, alpha)),
        "BV_mid_beta": ((0.0, 1.0), (alpha, 1.0)),
        "PureJump": ((0.0, 1.0), (1.0, 2.0)),
        "Martingale": ((1.0, 2.0), (1.0, 2.0)),
        "Martingale_heavy": ((2.0, math.inf), (2.0, 2.0)),
    }
    (alo, ahi), (blo, bhi) = ranges[regime]
    a_ok = (alo < alpha <= ahi) if regime != "Martingale" and regime != "Martingale_heavy" else (
        alo <= alpha <= ahi if regime == "Martingale" else alpha > alo)
    if not a_ok:
        raise RegimeInapplicable(f"{regime} needs alpha in its range, got alpha={alpha:g}")
    if not blo <= beta <= bhi:
        raise RegimeInapplicable(f"{regime} needs beta in [{blo:g}, {bhi:g}], got beta={beta:g}")

    if regime == "Martingale":
        k_hi, label = min(alpha, beta), "α∧β"
    else:
        k_hi, label = alpha, "α"
    _check_kappa(kappa, k_hi, label)

    if not spec.flags.bounded_coefficients:
        raise RegimeInapplicable(f"{regime} needs bounded coefficients: sup_x(|b|+|Q|+int(|y|^2 ^ 1) N) = inf")
    if sups is None or sups.alpha != alpha or sups.beta != beta:
        sups = coefficient_sups(spec, region, alpha=alpha, beta=beta)
    _require_finite(sups.M1, "sup_x(|b|+|Q|+int(|y|^2 ^ 1) N(x,dy))")
    hyp = [f"bounded coefficients: M1 = {sups.M1:.6g}"]
    _require_finite(sups.M2, f"sup_x int_(|y|>1) |y|^{alpha:g} N(x,dy)")
    _require_finite(sups.inner, f"sup_x int_(|y|<=1) |y|^{beta:g} N(x,dy)")
    hyp.append(f"sup int_(|y|>1) |y|^{alpha:g} N = {sups.M2:.6g}")
    hyp.append(f"sup int_(|y|<=1) |y|^{beta:g} N = {sups.inner:.6g}")

    k = kappa
    qsup = sups.diffusion_sup
    if regime == "PureJump":
        drift, drift_used = sups.drift_sup, "standard"
    elif regime in ("BV_mid_beta", "BV_small_beta"):
        drift, drift_used = sups.compensated_drift_sup, "compensated"
    else:
        drift, drift_used = sups.outer_drift_sup, "outer"
    _require_finite(drift, f"sup_x |{drift_used} drift|")

    if regime == "PureJump":
        terms = [
            _power_term("drift", drift, k, False),
            _power_term("diffusion", qsup, k / 2, True),
            _power_term("inner", sups.inner, k / beta, True),
            _power_term("outer", sups.M2, k / alpha, False),
        ]
    elif regime == "BV_mid_beta":
        terms = [
            _power_term("drift", drift, k, False),
            _power_term("diffusion", qsup, k / 2, True),
            _power_term("inner", sups.inner, k / beta, False),
            _power_term("outer", sups.M2, k / alpha, False),
        ]
    elif regime == "BV_small_beta":
        terms = [
            _power_term("drift", drift, k, False),
            _power_term("diffusion", qsup, k / 2, True),
            _power_term("all", sups.all_moment, k / alpha, False),
        ]
        _require_finite(sups.all_moment, f"sup_x int |y|^{alpha:g} N(x,dy)")
    elif regime == "Martingale":
        terms = [
            _power_term("drift", drift, k, True),
            _power_term("diffusion", qsup, k / 2, True),
            _power_term("inner", sups.inner, k / beta, True),
            _power_term("outer", sups.M2, k / alpha, True),
        ]
    else:
        all2 = coefficient_sups(spec, region, alpha=2.0, beta=2.0).all_moment
        _require_finite(sups.all_moment, f"sup_x int |y|^{alpha:g} N(x,dy)")
        terms = [
            _power_term("drift", drift, k, True),
            _power_term("diffusion", qsup, k / 2, True),
            _power_term("all", sups.all_moment, k / alpha, True),
            _power_term("all_square", all2, k / 2, True),
        ]
    return _assemble(regime, kappa, alpha, beta, t_arr, terms, (0.0, math.inf), (0.0, k_hi),
                     hyp, drift_used)


def _assemble(regime, kappa, alpha, beta, t, terms, t_range, k_range, hyp, drift_used, log_corr=False):
    if kappa == 0.0:
        value = np.ones_like(t)
        shape = np.ones_like(t)
        symbolic = False
    else:
        value = np.zeros_like(t)
        shape = np.zeros_like(t)
        for term in terms:
            v = term.at(t)
            shape = shape + v
            if not term.symbolic:
                value = value + v
        symbolic = any(term.symbolic and term.coefficient != 0.0 for term in terms)
    exponent = LOG_CORRECTED if log_corr and kappa > 0 else TABLE_1[regime]
    return EnvelopeBound(
        regime=regime, kappa=kappa, alpha=alpha, beta=beta, exponent=exponent, terms=tuple(terms),
        t=t, value=value if value.ndim else float(value), shape=shape if shape.ndim else float(shape),
        symbolic_constant=symbolic, t_range=t_range, kappa_range=k_range, hypotheses=tuple(hyp),
        drift_used=drift_used, log_corrected=log_corr and kappa > 0,
    )


def _symbol_growth_envelope(spec, regime, kappa, t, alpha, beta, x):
    est = bg_index(spec, x)
    if regime == "SymbolGrowthSmallTime":
        a = est.beta_inf if alpha is None else float(alpha)
        if not 0.0 < a <= 2.0:
            raise RegimeInapplicable(f"growth exponent must lie in (0, 2], got {a:g}")
        if a < est.beta_inf - BG_TOL:
            raise RegimeInapplicable(
                f"growth condition at infinity fails: alpha={a:g} < estimated index {est.beta_inf:.3f}")
        _check_kappa(kappa, est.beta0, "β₀^x", open_right=True)
        log_corr = abs(kappa - a) <= INDEX_SNAP
        e = 1.0 if log_corr else min(kappa / a, 1.0)
        term = Term("symbol_growth", e, 1.0, True)
        hyp = [f"beta_inf^x estimate {est.beta_inf:.4f}", f"beta_0^x estimate {est.beta0:.4f}"]
        env = _assemble(regime, kappa, a, est.beta0, t, [term], (0.0, 1.0), (0.0, est.beta0), hyp, "",
                        log_corr)
        if log_corr and kappa > 0:
            with np.errstate(divide="ignore"):
                shape = np.where(t > 0, t * np.abs(np.log(np.where(t > 0, t, 1.0))), 0.0)
            env = _replace(env, shape=shape if shape.ndim else float(shape))
        return env
    b = est.beta0 if beta is None else float(beta)
    if not 0.0 < b <= 2.0:
        raise RegimeInapplicable(f"growth exponent must lie in (0, 2], got {b:g}")
    if b > est.beta0 + BG_TOL:
        raise RegimeInapplicable(
            f"growth condition at zero fails: beta={b:g} > estimated index {est.beta0:.3f}")
    _check_kappa(kappa, b, "β", open_right=True)
    term = Term("symbol_growth", kappa / b, 1.0, True)
    hyp = [f"beta_0^x estimate {est.beta0:.4f}"]
    return _assemble(regime, kappa, est.beta_inf, b, t, [term], (1.0, math.inf), (0.0, b), hyp, "")


def _replace(env, **kw):
    from dataclasses import replace
    return replace(env, **kw)


# -- exponent predictions ----------------------------------------------------

@dataclass(frozen=True)
class ExponentPrediction:
    exponent: float
    log_corrected: bool
    index: float
    beta0: float
    guaranteed: bool = True
    note: str = ""

    def to_dict(self):
        return {"exponent": self.exponent, "log_corrected": self.log_corrected, "index": self.index,
                "beta0": self.beta0, "guaranteed": self.guaranteed, "note": self.note}


def small_time_exponent(spec, x, kappa, strict=True, index=None):
    """Predicted t-exponent of E^x sup_{s<=t}|X_s - x|^kappa as t -> 0.

    The growth exponent is the estimated index at infinity (the smallest
    admissible one).  kappa within INDEX_SNAP of it is treated as the
    boundary case and reported as the log-corrected exponent 1.  With
    ``strict=False`` a kappa beyond the estimated index at 0 still gets a
    prediction, marked ``guaranteed=False``.
    """
    kappa = float(kappa)
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    est = bg_index(spec, x)
    a = est.beta_inf if index is None else float(index)
    if kappa == 0.0:
        return ExponentPrediction(0.0, False, a, est.beta0)
    guaranteed = kappa < est.beta0
    if not guaranteed and strict:
        raise OutsideGuaranteedRange(
            f"kappa={kappa:g} >= estimated index at 0 ({est.beta0:.4f}); no small-time guarantee")
    log_corr = abs(kappa - a) <= INDEX_SNAP
    e = 1.0 if log_corr else min(kappa / a, 1.0)
    note = "" if guaranteed else "kappa beyond the estimated index at 0"
    return ExponentPrediction(e, log_corr, a, est.beta0, guaranteed, note)


def large_time_exponent(spec, kappa, x=0.0, beta=None):
    """kappa / beta for t >= 1 with beta the estimated index at 0 (or a given smaller beta)."""
    kappa = float(kappa)
    est = bg_index(spec, x)
    b = est.beta0 if beta is None else float(beta)
    if beta is not None and b > est.beta0 + BG_TOL:
        raise RegimeInapplicable(f"beta={b:g} exceeds the estimated index at 0 ({est.beta0:.4f})")
    if kappa == 0.0:
        return ExponentPrediction(0.0, False, b, est.beta0)
    if kappa >= b:
        raise RegimeInapplicable(f"kappa={kappa:g} >= beta={b:g}: large-time bound inapplicable")
    return ExponentPrediction(kappa / b, False, b, est.beta0)


# -- moment existence ----------------------------------------------------------

@dataclass(frozen=True)
class MomentExistence:
    function: str
    exists: bool
    M1: float
    M2: float
    reason: str

    def to_dict(self):
        return {"function": self.function, "exists": self.exists, "M1": self.M1, "M2": self.M2,
                "reason": self.reason}


def _tail_exists(kernel, f, lo, hi):
    """Analytic decision of sup_x int_(|y|>=1) f(y) N(x,dy) < inf; returns (bool, reason)."""
    fam = kernel.family
    if fam == "None":
        return True, "no jumps"
    if kernel.truncate is not None:
        return True, "jumps bounded by the truncation radius"
    if fam == "CompoundPoisson":
        if kernel.law in ("TwoPoint", "Uniform"):
            return True, "uniformly bounded jumps"
        return True, "Gaussian jump law has finite exponential moments"
    if f.kind in ("one", "log"):
        return True, "log-growth tail integral converges for power tails"
    if fam == "SymmetricStable":
        a_lo = kernel.param_range("order", lo, hi)[0]
        if f.kind == "power":
            ok = f.param < a_lo
            return ok, f"power {f.param:g} {'<' if ok else '>='} inf order {a_lo:g}"
        if f.kind == "exp_linear" and f.param == 0.0:
            return True, "f = 1"
        return False, "exponential growth against a power-law tail"
    lam_lo = kernel.param_range("tempering", lo, hi)[0]
    if f.kind == "power":
        return True, "tempered tail has all power moments"
    if f.kind == "exp_power":
        if f.param < 1.0:
            return True, "sub-exponential growth against exponential tempering"
        ok = lam_lo >= 1.0
        return ok, f"exp(|y|) against tempering {lam_lo:g}"
    ok = abs(f.param) <= lam_lo
    return ok, f"exp({f.param:g} y) against tempering {lam_lo:g}"


def moment_exists(spec, f, region=None, grid_points=201):
    """Decide sup_x int_(|y|>=1) f(y) N(x,dy) < inf and return the growth constants M1, M2."""
    f = MomentFunction.parse(f)
    if f.kind not in MOMENT_CATALOG:
        raise UnsupportedFunction(f"{f} is outside the moment catalog {MOMENT_CATALOG}")
    k = spec.kernel
    lo, hi = (-math.inf, math.inf) if region is None else (float(region[0]), float(region[1]))
    exists, reason = _tail_exists(k, f, lo, hi)
    M1 = coefficient_sups(spec, region, alpha=1.0, beta=2.0).M1
    if not exists:
        return MomentExistence(str(f), False, M1, math.inf, reason)
    if f.kind == "one":
        fun = lambda xs: k.fractional_moment(xs, 0.0, "Outer")
    elif f.kind == "power":
        fun = lambda xs: k.fractional_moment(xs, f.param, "Outer")
    else:
        g = lambda y: float(f(y))
        fun = lambda xs: np.array([k.integrate(float(v), g, "Outer") for v in np.atleast_1d(xs)])
    if spec.kernel.is_modulated:
        a, b = search_interval(spec, region)
        xs = np.linspace(a, b, grid_points)
        M2 = float(np.max(fun(xs)))
    else:
        M2 = float(np.max(fun(np.array([0.0 if region is None else lo]))))
    return MomentExistence(str(f), True, M1, M2, reason)


# -- function conditions -------------------------------------------------------

CONDITIONS = {
    "a": "submultiplicative",
    "b": "log-Hölder",
    "c": "Hölder+bounded-below",
    "d": "gradient-ratio",
    "e": "gradient-ratio-uniform",
}
_GAMMAS = np.round(np.arange(0.05, 1.0001, 0.05), 2)
_STABLE = math.log(1.05)


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    verdict: str  # "holds-on-grid" or "violated"
    witness: tuple | None
    constants: dict = field(default_factory=dict)
    refined: dict = field(default_factory=dict)
    grid: tuple = ()
    note: str = ""

    @property
    def holds(self):
        return self.verdict == "holds-on-grid"

    def to_dict(self):
        return {"condition": self.condition, "name": CONDITIONS[self.condition], "verdict": self.verdict,
                "witness": None if self.witness is None else list(self.witness),
                "constants": self.constants, "refined": self.refined, "grid": list(self.grid),
                "note": self.note}


def _grid(lo, hi, n):
    if n % 2 == 0:
        n += 1
    return np.linspace(lo, hi, n)


def _refine(grid):
    lo, hi, n = grid
    return (2 * lo, 2 * hi, 4 * (n - 1) + 1)


def _stable_log(c0, c1):
    """True when a nonnegative constant did not grow under refinement."""
    if not (math.isfinite(c0) and math.isfinite(c1)):
        return False
    if c1 <= 1e-12:
        return True
    if c0 <= 1e-12:
        return False
    return math.log(c1) - math.log(c0) <= _STABLE


def _submult(f, xs):
    lf = f.log(xs)
    s = f.log(xs[:, None] + xs[None, :]) - lf[:, None] - lf[None, :]
    m = np.nanmax(s)
    # ties broken towards the largest x = y
    idx = np.argwhere(s >= m - 1e-12 * max(1.0, abs(m)))
    best = max(idx.tolist(), key=lambda ij: (xs[ij[0]] + xs[ij[1]], xs[ij[0]]))
    return m, (float(xs[best[0]]), float(xs[best[1]]))


def _holder(values, xs, gamma):
    d = np.abs(values[:, None] - values[None, :])
    h = np.abs(xs[:, None] - xs[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(h > 0, d / h ** gamma, 0.0)
    r = np.where(np.isnan(r), np.inf, r)
    i, j = np.unravel_index(int(np.argmax(r)), r.shape)
    return float(r[i, j]), (float(xs[i]), float(xs[j]))


def _holder_scan(fun, g0, g1):
    xs0, xs1 = _grid(*g0), _grid(*g1)
    v0, v1 = fun(xs0), fun(xs1)
    best, best_growth = None, math.inf
    last = None
    for gamma in _GAMMAS:
        c0, w0 = _holder(v0, xs0, gamma)
        c1, w1 = _holder(v1, xs1, gamma)
        last = (float(gamma), c0, c1, w0)
        if not _stable_log(c0, c1):
            continue
        growth = 0.0 if c1 <= 1e-12 else math.log(c1) - math.log(c0)
        # least growth under refinement wins; ties go to the larger exponent
        if growth <= best_growth + 1e-9:
            best, best_growth = (float(gamma), c0, c1, w0), min(growth, best_growth)
    return best, last


def check_condition(f, condition, grid=(-10.0, 10.0, 201)):
    """Grid falsification of one sufficient condition (a)-(e) for ``f``.

    A constant is accepted when it is finite and grows by at most 5% when the
    grid extent doubles and the point count quadruples.  "holds-on-grid" is
    evidence, not proof.
    """
    f = MomentFunction.parse(f)
    cond = str(condition).strip("() ").lower()
    if cond not in CONDITIONS:
        for key, name in CONDITIONS.items():
            if cond == name.lower():
                cond = key
        if cond not in CONDITIONS:
            raise ValueError(f"unknown condition {condition!r}")
    g0 = (float(grid[0]), float(grid[1]), int(grid[2]))
    g1 = _refine(g0)
    xs0, xs1 = _grid(*g0), _grid(*g1)

    if cond == "a":
        m0, w0 = _submult(f, xs0)
        m1, _ = _submult(f, xs1)
        c0, c1 = math.exp(min(m0, 700.0)), math.exp(min(m1, 700.0))
        consts = {"c": c0, "log_c": m0}
        ok = math.isfinite(m1) and m1 - m0 <= _STABLE
        return ConditionReport("a", "holds-on-grid" if ok else "violated", None if ok else w0, consts,
                               {"c": c1, "log_c": m1}, g0)

    if cond == "b":
        best, last = _holder_scan(f.log, g0, g1)
        if best is None:
            return ConditionReport("b", "violated", last[3], {"gamma": last[0], "c": last[1]},
                                   {"c": last[2]}, g0, "no Hölder exponent gives a stable constant")
        return ConditionReport("b", "holds-on-grid", None, {"gamma": best[0], "c": best[1]},
                               {"c": best[2]}, g0)

    if cond == "c":
        with np.errstate(over="ignore"):
            fv0, fv1 = f(xs0), f(xs1)
        if not np.all(np.isfinite(fv1)):
            i = int(np.flatnonzero(~np.isfinite(fv1))[0])
            return ConditionReport("c", "violated", (float(xs1[i]),), {}, {}, g0, "f overflows")
        m = float(np.min(fv0))
        if not _inf_positive(m, float(np.min(fv1))):
            i = int(np.argmin(fv1))
            return ConditionReport("c", "violated", (float(xs1[i]),), {"inf_f": m}, {}, g0, "inf f = 0")
        best, last = _holder_scan(lambda xs: f(xs), g0, g1)
        if best is None:
            return ConditionReport("c", "violated", last[3], {"gamma": last[0], "c": last[1], "inf_f": m},
                                   {"c": last[2]}, g0, "f is not Hölder on the grid")
        return ConditionReport("c", "holds-on-grid", None, {"gamma": best[0], "c": best[1], "inf_f": m},
                               {"c": best[2]}, g0)

    kink = _nondifferentiable_point(f)
    if kink is not None:
        return ConditionReport(cond, "violated", (kink,), {}, {}, g0, "f is not differentiable")

    if cond == "d":
        r = 0.5

        def ratio(xs):
            zs = np.linspace(-r, r, 21)
            yz = xs[:, None] + zs[None, :]
            with np.errstate(over="ignore", invalid="ignore"):
                v = f.log_grad_ratio(yz) * np.exp(f.log(yz) - f.log(xs)[:, None])
            v = np.where(np.isnan(v), np.inf, v)
            i = int(np.argmax(np.max(v, axis=1)))
            return float(np.max(v)), (float(xs[i]),)

        c0, w0 = ratio(xs0)
        c1, _ = ratio(xs1)
        ok = _stable_log(c0, c1)
        return ConditionReport("d", "holds-on-grid" if ok else "violated", None if ok else w0,
                               {"c": c0, "r": r}, {"c": c1}, g0)

    # (e)
    with np.errstate(over="ignore"):
        m = float(np.min(np.exp(f.log(xs0))))
        m1 = float(np.min(np.exp(f.log(xs1))))
    if not _inf_positive(m, m1):
        return ConditionReport("e", "violated", (float(xs1[int(np.argmin(f.log(xs1)))]),), {"inf_f": m}, {},
                               g0, "inf f = 0")
    lr0, lr1 = f.log_grad_ratio(xs0), f.log_grad_ratio(xs1)
    c0, c1 = float(np.max(lr0)), float(np.max(lr1))
    if not _stable_log(c0, c1):
        return ConditionReport("e", "violated", (float(xs0[int(np.argmax(lr0))]),), {"c": c0, "inf_f": m},
                               {"c": c1}, g0, "|f'|/f unbounded")

    def modulus(xs):
        with np.errstate(over="ignore", invalid="ignore"):
            d = f.derivative(xs)
        w = np.abs(np.diff(d))
        w = np.where(np.isnan(w), np.inf, w)
        i = int(np.argmax(w))
        return float(w[i]), (float(xs[i]), float(xs[i + 1]))

    w0, wit = modulus(xs0)
    w1, _ = modulus(xs1)
    # uniform continuity: the modulus must shrink when the spacing shrinks by 4
    ok = math.isfinite(w1) and (w1 <= 1e-12 or w1 <= 0.5 * w0)
    return ConditionReport("e", "holds-on-grid" if ok else "violated", None if ok else wit,
                           {"c": c0, "inf_f": m, "modulus": w0}, {"c": c1, "modulus": w1}, g0,
                           "" if ok else "f' is not uniformly continuous on the grid")


def _inf_positive(m0, m1):
    """inf f > 0 on the grid and not drifting to 0 under refinement."""
    return m0 > 0.0 and m1 > 0.0 and math.log(m0) - math.log(m1) <= _STABLE


def _nondifferentiable_point(f):
    if f.kind == "power" and f.param > 0:
        return 1.0
    if f.kind == "log":
        return math.e
    if f.kind == "exp_power":
        return 0.0
    if f.kind == "abs_power" and 0 < f.param < 1:
        return 0.0
    return None
