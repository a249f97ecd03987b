"""Monte Carlo estimators and statistical checks of the moment bounds.

All estimators simulate one common set of paths per call and read every
requested time off the same skeletons, so curves are exactly monotone in t.
Every report carries the spec hash, the seed and the number of paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import check_condition, moment_exists
from .errors import InapplicableCheck, MomentDoesNotExist, NonConvergentEstimate
from .functions import MomentFunction
from .simulate import SimConfig, simulate_paths
from .symbol import growth_constants, symbol

DEFAULT_STEPS_PER_UNIT = 2 ** 12
SLOPE_TOL = 0.07


# -- result types ----------------------------------------------------------------

@dataclass(frozen=True)
class MomentCurve:
    kappa: float
    t_grid: np.ndarray
    estimates: np.ndarray
    std_errors: np.ndarray
    n_paths: int
    non_convergent: bool = False
    spec_hash: str = ""
    seed: int = 0
    x0: float = 0.0
    se_half: np.ndarray | None = None

    def to_dict(self):
        return {
            "kappa": self.kappa, "t_grid": self.t_grid.tolist(), "estimates": self.estimates.tolist(),
            "std_errors": self.std_errors.tolist(), "n_paths": self.n_paths,
            "non_convergent": self.non_convergent, "spec_hash": self.spec_hash, "seed": self.seed,
            "x0": self.x0,
        }

    def rows(self):
        return [(float(t), float(e), float(s)) for t, e, s in zip(self.t_grid, self.estimates, self.std_errors)]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float
    window: tuple
    n_points: int
    predicted: float | None = None
    tolerance: float = SLOPE_TOL
    passed: bool | None = None

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "residual": self.residual,
                "window": list(self.window), "n_points": self.n_points, "predicted": self.predicted,
                "tolerance": self.tolerance, "passed": self.passed}


@dataclass(frozen=True)
class Estimate:
    mean: float
    se: float
    n_paths: int
    flagged: bool = False
    note: str = ""
    spec_hash: str = ""
    seed: int = 0

    def to_dict(self):
        return {"mean": self.mean, "se": self.se, "n_paths": self.n_paths, "flagged": self.flagged,
                "note": self.note, "spec_hash": self.spec_hash, "seed": self.seed}


@dataclass(frozen=True)
class CheckReport:
    check: str
    passed: bool
    details: dict = field(default_factory=dict)
    spec_hash: str = ""
    seed: int = 0
    n_paths: int = 0

    def to_dict(self):
        return {"check": self.check, "passed": self.passed, "spec_hash": self.spec_hash, "seed": self.seed,
                "n_paths": self.n_paths, "details": _plain(self.details)}


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


# -- helpers -------------------------------------------------------------------------

def grid_config(times, steps_per_unit=DEFAULT_STEPS_PER_UNIT, seed=0, base=None, **overrides):
    """SimConfig whose grid contains every requested time (snapped to the step)."""
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise ValueError("times must be > 0")
    t_end = float(times.max())
    n_steps = max(1, int(round(t_end * steps_per_unit)))
    h = t_end / n_steps
    idx = np.rint(times / h).astype(int)
    idx = np.clip(idx, 1, n_steps)
    cfg = base if base is not None else SimConfig(seed=seed)
    cfg = replace(cfg, t_end=t_end, n_steps=n_steps, record=tuple(int(i) for i in np.unique(idx)),
                  **overrides)
    return cfg, idx


def _mean_se(values):
    n = values.shape[0]
    mean = values.mean(axis=0)
    if n < 2:
        return mean, np.zeros_like(mean)
    se = values.std(axis=0, ddof=1) / math.sqrt(n)
    return mean, se


def _columns(batch, idx):
    pos = np.searchsorted(batch.record_indices, idx)
    return pos


def _power(values, kappa):
    if kappa == 0.0:
        return np.ones_like(values)
    return values ** kappa


# -- estimators --------------------------------------------------------------------

def estimate_sup_moment(spec, x0, kappa, t_grid, n_paths, config=None,
                        steps_per_unit=DEFAULT_STEPS_PER_UNIT, seed=0):
    """Curve of E^x sup_{s<=t}|X_s - x|^kappa over ``t_grid`` from common paths.

    The curve is flagged non-convergent when doubling the paths (first half
    against all) does not shrink the standard error at most grid points.
    """
    kappa = float(kappa)
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    cfg, idx = grid_config(t_grid, steps_per_unit, seed, base=config)
    times = idx * cfg.h
    if kappa == 0.0:
        ones = np.ones_like(t_grid)
        return MomentCurve(0.0, times, ones, np.zeros_like(ones), int(n_paths), False, spec.spec_hash(),
                           cfg.seed, float(x0))
    batch = simulate_paths(spec, x0, cfg, int(n_paths))
    sups = batch.running_sup[:, _columns(batch, idx)]
    vals = _power(sups, kappa)
    mean, se = _mean_se(vals)
    half = max(2, int(n_paths) // 2)
    _, se_half = _mean_se(vals[:half])
    grew = (se > se_half) & (se > 0)
    non_conv = bool(np.count_nonzero(grew) * 2 > np.count_nonzero(se > 0)) if np.any(se > 0) else False
    return MomentCurve(kappa, times, mean, se, int(n_paths), non_conv, spec.spec_hash(), cfg.seed,
                       float(x0), se_half)


def estimate_endpoint_moment(spec, x0, f, t, n_paths, config=None, steps_per_unit=DEFAULT_STEPS_PER_UNIT,
                             seed=0):
    """Plain MC mean of f(X_t - x0); flagged when the moment is not known to exist."""
    f = MomentFunction.parse(f)
    cfg, idx = grid_config([t], steps_per_unit, seed, base=config)
    if f.kind == "one":
        return Estimate(1.0, 0.0, int(n_paths), False, "", spec.spec_hash(), cfg.seed)
    flagged, note = _existence_flag(spec, f)
    batch = simulate_paths(spec, x0, cfg, int(n_paths))
    y = batch.states[:, _columns(batch, idx)[0]] - x0
    with np.errstate(over="ignore"):
        v = f(y)
    mean, se = _mean_se(v[:, None])
    return Estimate(float(mean[0]), float(se[0]), int(n_paths), flagged, note, spec.spec_hash(), cfg.seed)


def _existence_flag(spec, f):
    probe = f
    if f.kind in ("abs_power", "monomial"):
        probe = MomentFunction("power", f.param)
    if probe.kind not in ("one", "power", "exp_power", "log", "exp_linear"):
        return True, f"{f} outside the moment catalog"
    try:
        ex = moment_exists(spec, probe)
    except Exception as err:  # a spec with unbounded coefficients still simulates
        return False, f"existence not decided: {err}"
    return (not ex.exists), ex.reason


def fit_slope(t, y, window):
    lo, hi = window
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    sel = (t >= lo * (1 - 1e-12)) & (t <= hi * (1 + 1e-12))
    if np.count_nonzero(sel) < 4:
        raise ValueError(f"slope fit needs >= 4 grid points in {window}, got {np.count_nonzero(sel)}")
    if np.any(y[sel] <= 0):
        raise ValueError("slope fit needs positive estimates")
    lt, ly = np.log(t[sel]), np.log(y[sel])
    A = np.vstack([lt, np.ones_like(lt)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = float(np.sqrt(np.mean((ly - A @ np.array([slope, icpt])) ** 2)))
    return float(slope), float(icpt), resid, int(np.count_nonzero(sel)), (float(t[sel][0]), float(t[sel][-1]))


def _fit(curve, window, predicted, tol):
    if curve.non_convergent:
        raise NonConvergentEstimate("curve failed the path-doubling test; refusing to fit")
    slope, icpt, resid, n, win = fit_slope(curve.t_grid, curve.estimates, window)
    passed = None if predicted is None else bool(abs(slope - predicted) <= tol)
    return SlopeFit(slope, icpt, resid, win, n, predicted, tol, passed)


def fit_small_time_slope(curve, window=None, predicted=None, tol=SLOPE_TOL):
    """Log-log slope of a sup-moment curve for t <= 1 (needs >= 1.5 decades)."""
    t = curve.t_grid
    if window is None:
        window = (float(t[t <= 1.0].min()), float(t[t <= 1.0].max()))
    if window[1] > 1.0 or math.log10(window[1] / window[0]) < 1.5:
        raise ValueError("small-time window must lie below 1 and span >= 1.5 decades")
    return _fit(curve, window, predicted, tol)


def fit_large_time_slope(curve, window=(1.0, 64.0), predicted=None, tol=SLOPE_TOL):
    """Log-log slope of a sup-moment curve over a window with t >= 1."""
    if window[0] < 1.0:
        raise ValueError("large-time window must start at t >= 1")
    return _fit(curve, window, predicted, tol)


# -- checks --------------------------------------------------------------------------

def _is_degenerate_martingale(spec):
    return (spec.kernel.family == "None" and spec.drift.is_constant and float(spec.drift(0.0)) == 0.0
            and spec.diffusion.is_bounded)


def wald_check(spec, x0, half_width, horizon, n_paths, steps_per_unit=64, seed=0, measure_cap_bias=False,
               config=None):
    """Mean of X at the first grid exit from (x0 - a, x0 + a), capped at the horizon."""
    if not (spec.flags.martingale_type or _is_degenerate_martingale(spec)):
        raise InapplicableCheck("wald check needs a martingale-type spec")
    if spec.kernel.family != "None":
        m1 = float(spec.kernel.fractional_moment(x0, 1.0, "Outer"))
        if not math.isfinite(m1):
            raise InapplicableCheck("kernel has no finite first moment")
    a = float(half_width)

    def run(T):
        cfg, idx = grid_config([T], steps_per_unit, seed, base=config, stop_outside=(x0 - a, x0 + a))
        batch = simulate_paths(spec, x0, cfg, int(n_paths))
        xt = batch.states[:, -1]
        mean, se = _mean_se(xt[:, None])
        return float(mean[0]), float(se[0]), float(np.mean(batch.exit_step < 0)), cfg.seed

    mean, se, capped, used_seed = run(float(horizon))
    passed = abs(mean - x0) <= 3 * se if se > 0 else abs(mean - x0) <= 1e-12
    details = {"mean": mean, "se": se, "x0": x0, "ci": [mean - 3 * se, mean + 3 * se],
               "fraction_capped": capped, "half_width": a, "horizon": horizon,
               "steps_per_unit": steps_per_unit}
    if measure_cap_bias:
        m2, s2, _, _ = run(2.0 * float(horizon))
        details["cap_bias"] = {"mean_2T": m2, "se_2T": s2, "difference": m2 - mean}
    return CheckReport("wald", bool(passed), details, spec.spec_hash(), used_seed, int(n_paths))


def _state_samples(spec, x0, n):
    if spec.is_constant:
        return np.array([x0])
    return x0 + np.linspace(-math.pi, math.pi, n)


def subadditivity_check(spec, alpha, t_grid=(0.25, 0.5, 1.0), n_paths=20000, x_samples=5,
                        steps_per_unit=256, seed=0, x0=0.0):
    """Worst f(t+s) - f(t) - f(s) with f(t) = max over sampled x of E^x|X_t - x|^alpha."""
    if not spec.flags.bounded_coefficients:
        raise InapplicableCheck("subadditivity check needs bounded coefficients")
    thr = spec.kernel.outer_threshold()
    if alpha >= thr:
        raise InapplicableCheck(f"alpha={alpha:g} is not below the kernel moment threshold {thr:g}")
    ts = np.asarray(t_grid, dtype=float)
    need = np.unique(np.concatenate([ts, (ts[:, None] + ts[None, :]).ravel()]))
    cfg, idx = grid_config(need, steps_per_unit, seed)
    f_mean = np.full(need.size, -np.inf)
    f_se = np.zeros(need.size)
    for xs in _state_samples(spec, x0, x_samples):
        batch = simulate_paths(spec, xs, cfg, int(n_paths))
        y = np.abs(batch.states[:, _columns(batch, idx)] - xs) ** alpha
        m, s = _mean_se(y)
        better = m > f_mean
        f_mean = np.where(better, m, f_mean)
        f_se = np.where(better, s, f_se)
    pos = {float(t): i for i, t in enumerate(need)}
    worst, worst_pair, worst_se, margin = -np.inf, None, 0.0, -np.inf
    for t in ts:
        for s in ts:
            if s < t:
                continue
            i, j, k = pos[float(t + s)], pos[float(t)], pos[float(s)]
            v = f_mean[i] - f_mean[j] - f_mean[k]
            cse = math.sqrt(f_se[i] ** 2 + f_se[j] ** 2 + f_se[k] ** 2)
            if v - 3 * cse > margin:
                margin = v - 3 * cse
            if v > worst:
                worst, worst_pair, worst_se = float(v), (float(t), float(s)), cse
    passed = margin <= 1e-12 * max(1.0, float(np.max(np.abs(f_mean))))
    details = {"worst_violation": worst, "pair": worst_pair, "combined_se": worst_se,
               "times": need, "f": f_mean, "se": f_se, "alpha": alpha}
    return CheckReport("subadditivity", bool(passed), details, spec.spec_hash(), cfg.seed, int(n_paths))


def backward_moment_check(spec, f, x0, t, s_grid, n_paths=10000, seeds=(0, 1, 2, 3, 4),
                          steps_per_unit=256, stability=0.2):
    """R = max_s E f(X_s - x0) / E f(X_t - x0) and its spread across seeds."""
    f = MomentFunction.parse(f)
    verdicts = {c: check_condition(f, c).holds for c in "abcde"} if f.kind != "one" else {"a": True}
    if not any(verdicts.values()):
        raise InapplicableCheck(f"{f} satisfies none of the time-independence conditions on the grid")
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any(s_grid <= 0) or np.any(s_grid > t):
        raise ValueError("s_grid must lie in (0, t]")
    times = np.unique(np.append(s_grid, t))
    ratios = []
    for sd in seeds:
        if f.kind == "one":
            ratios.append(1.0)
            continue
        cfg, idx = grid_config(times, steps_per_unit, sd)
        batch = simulate_paths(spec, x0, cfg, int(n_paths))
        y = batch.states[:, _columns(batch, idx)] - x0
        with np.errstate(over="ignore"):
            m = f(y).mean(axis=0)
        ratios.append(float(np.max(m) / m[-1]))
    ratios = np.asarray(ratios)
    spread = float((ratios.max() - ratios.min()) / ratios.mean())
    passed = bool(np.all(np.isfinite(ratios)) and spread < stability)
    details = {"ratios": ratios, "R": float(ratios.mean()), "spread": spread, "conditions": verdicts,
               "t": t, "s_grid": s_grid}
    return CheckReport("backward", passed, details, spec.spec_hash(), int(seeds[0]), int(n_paths))


def local_symbol_sup(spec, x0, r, n_ball=256, n_freq=256):
    """sup_{|y - x0| <= r} sup_{|xi| <= 1/r} |q(y, xi)|."""
    ys = np.array([x0]) if spec.is_constant else np.unique(np.append(np.linspace(x0 - r, x0 + r, n_ball), x0))
    xis = np.linspace(0.0, 1.0 / r, n_freq)
    return float(np.abs(symbol(spec, ys[:, None], xis[None, :])).max())


def maximal_ratio_check(spec, x0, r, t_grid, n_paths=20000, steps_per_unit=DEFAULT_STEPS_PER_UNIT, seed=0,
                        growth_factor=2.0):
    """P(sup_{s<=t}|X_s - x0| > r) / (t G(r)); passes when the ratio does not grow as t decreases."""
    if not spec.flags.bounded_coefficients:
        raise InapplicableCheck("maximal inequality check needs bounded coefficients")
    t_grid = np.asarray(t_grid, dtype=float)
    G = local_symbol_sup(spec, x0, r)
    cfg, idx = grid_config(t_grid, steps_per_unit, seed)
    batch = simulate_paths(spec, x0, cfg, int(n_paths))
    hit = (batch.running_sup[:, _columns(batch, idx)] > r).astype(float)
    p, se = _mean_se(hit)
    times = idx * cfg.h
    denom = times * G
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, p / denom, 0.0)
        ratio_se = np.where(denom > 0, se / denom, 0.0)
    half = max(1, t_grid.size // 2)
    small, large = ratio[:half], ratio[half:]
    small_se = ratio_se[:half]
    ref = float(large.max()) if large.size else float(small.max())
    passed = bool(np.all(small <= growth_factor * ref + 3 * small_se + 1e-15))
    details = {"t_grid": times, "probability": p, "se": se, "G": G, "ratio": ratio,
               "empirical_C": float(ratio.max()), "r": r}
    return CheckReport("maximal", passed, details, spec.spec_hash(), cfg.seed, int(n_paths))


def moment_growth_check(spec, x0, n, t_grid, n_paths=20000, steps_per_unit=DEFAULT_STEPS_PER_UNIT, seed=0,
                        tol=0.1):
    """Small-t slope of log E(X_t - x0)^(2n); the bound requires slope >= 1."""
    n = int(n)
    if spec.kernel.family != "None":
        m = float(spec.kernel.fractional_moment(x0, 2.0 * n, "Outer"))
        if not math.isfinite(m):
            raise InapplicableCheck(f"kernel has an infinite {2 * n}-th moment")
    consts = {}
    for k in range(1, 2 * n + 1):
        try:
            consts[k] = growth_constants(spec, k).c
        except MomentDoesNotExist as err:
            raise InapplicableCheck(str(err)) from err
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(t_grid > 1):
        raise ValueError("t_grid must lie in (0, 1]")
    cfg, idx = grid_config(t_grid, steps_per_unit, seed)
    batch = simulate_paths(spec, x0, cfg, int(n_paths))
    y = (batch.states[:, _columns(batch, idx)] - x0) ** (2 * n)
    mean, se = _mean_se(y)
    times = idx * cfg.h
    slope, icpt, resid, npts, win = fit_slope(times, mean, (times.min(), times.max()))
    passed = slope >= 1.0 - tol
    fit = SlopeFit(slope, icpt, resid, win, npts, 1.0, tol, bool(passed))
    details = {"fit": fit, "t_grid": times, "moments": mean, "se": se, "growth_constants": consts, "n": n}
    return CheckReport("growth", bool(passed), details, spec.spec_hash(), cfg.seed, int(n_paths))
