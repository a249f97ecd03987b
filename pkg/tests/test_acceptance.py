"""Acceptance criteria AC1-AC10 at their stated sizes and tolerances.

Each test records a one-line verdict that the terminal summary prints.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from levymoments import (
    JumpKernel,
    ProcessSpec,
    Expr,
    SimConfig,
    bg_index,
    brownian,
    compound_poisson,
    envelope,
    estimate_endpoint_moment,
    estimate_sup_moment,
    eval_symbol,
    fit_large_time_slope,
    fit_small_time_slope,
    large_time_exponent,
    load_preset,
    preset_names,
    simulate_paths,
    small_time_exponent,
    stable,
    subadditivity_check,
    symbol,
    symbol_derivative,
    wald_check,
)


def record(key, passed, detail, started):
    verdict = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES[key] = f"{key:<5} {verdict}  {detail}  [{time.time() - started:.1f}s]"
    print(ACCEPTANCE_LINES[key])
    assert passed, detail


def test_ac1_stable_like_symbol():
    t0 = time.time()
    spec = load_preset("AC1")
    xs = np.linspace(-2 * math.pi, 2 * math.pi, 100)
    xis = np.linspace(-50.0, 50.0, 100)
    worst = 0.0
    for x in xs:
        order = 1.2 + 0.3 * math.sin(x)
        for xi in xis:
            got = eval_symbol(spec, x, xi).value
            exact = abs(xi) ** order
            worst = max(worst, abs(got - exact) / max(1.0, exact))
    record("AC1", worst <= 1e-10, f"max relative error {worst:.2e} on 100x100 grid (tol 1e-10)", t0)


def _finite_variance_kernels():
    tempered = lambda a, c, lam: JumpKernel("TemperedStable", (("order", a), ("scale", c), ("tempering", lam)))
    return {
        "tempered(0.8,1,1.3)": (tempered(0.8, 1.0, 1.3), None),
        "tempered(1.5,2,0.7)": (tempered(1.5, 2.0, 0.7), None),
        "tempered(1,1,1)": (tempered(1.0, 1.0, 1.0), 2.0),
        "truncated-stable(1.2,R=2)": (JumpKernel("SymmetricStable", (("order", 1.2), ("scale", 1.0)),
                                                 truncate=2.0), None),
        "cp-gaussian": (JumpKernel("CompoundPoisson", (("rate", 1.5), ("law", "Gaussian"), ("mu", 0.5),
                                                       ("sigma", 0.7))), 1.5 * (0.25 + 0.49)),
        "cp-two-point": (JumpKernel("CompoundPoisson", (("rate", 2.0), ("law", "TwoPoint"), ("a", 3.0))),
                         2.0 * 9.0),
        "cp-uniform": (JumpKernel("CompoundPoisson", (("rate", 2.0), ("law", "Uniform"), ("a", 2.0))),
                       2.0 * 4.0 / 3.0),
    }


def test_ac2_derivative_identity(symbol_oracle):
    t0 = time.time()
    frozen = {c["name"]: c["second_moment"] for c in symbol_oracle}
    frozen_for = {"tempered(0.8,1,1.3)": "tempered_0.8_1_1.3", "tempered(1.5,2,0.7)": "tempered_1.5_2_0.7",
                  "truncated-stable(1.2,R=2)": "truncated_stable_1.2_R2"}
    Q, h = 0.3, 1e-3
    worst_rel, worst_fd = 0.0, 0.0
    for name, (kernel, exact) in _finite_variance_kernels().items():
        m2 = exact if exact is not None else frozen[frozen_for[name]]
        spec = ProcessSpec(kernel=kernel, diffusion=Expr.constant(Q))
        d2 = symbol_derivative(spec, 0.0, 2, 0.0).value
        worst_rel = max(worst_rel, abs(d2 - (Q + m2)) / (Q + m2))
        # O(h^2): central difference error within 1.5x its leading term |q''''| h^2 / 12
        q = lambda z: eval_symbol(spec, 0.0, z).value
        fd = (q(h) - 2 * q(0.0) + q(-h)) / h ** 2
        lead = abs(symbol_derivative(spec, 0.0, 4, 0.0).value) * h * h / 12
        worst_fd = max(worst_fd, abs(fd - d2) / (1.5 * lead + 1e-9))
    ok = worst_rel <= 1e-8 and worst_fd <= 1.0
    record("AC2", ok, f"max relative error {worst_rel:.1e} (tol 1e-8); central-difference error "
                      f"{worst_fd:.2f} of the O(h^2) budget", t0)


def test_ac3_bg_indices():
    t0 = time.time()
    errs = {}
    for a in (0.5, 1.0, 1.5, 1.9):
        est = bg_index(stable(a), 0.0)
        errs[f"stable {a:g}"] = max(abs(est.beta0 - a), abs(est.beta_inf - a))
    spec = load_preset("AC3")
    for x in (0.0, math.pi / 2, math.pi):
        est = bg_index(spec, x)
        errs[f"stable-like x={x:.3g}"] = abs(est.beta_inf - (1.2 + 0.3 * math.sin(x)))
    est = bg_index(brownian(), 0.0)
    errs["brownian"] = max(abs(est.beta0 - 2), abs(est.beta_inf - 2))
    worst = max(errs, key=errs.get)
    record("AC3", errs[worst] <= 0.05, f"max index error {errs[worst]:.4f} at {worst} (tol 0.05)", t0)


def test_ac4_small_time_exponent():
    t0 = time.time()
    spec = load_preset("AC4")
    pred = small_time_exponent(spec, 0.0, 0.75)
    t_grid = 2.0 ** np.arange(-10, -3)
    curve = estimate_sup_moment(spec, 0.0, 0.75, t_grid, 100_000, steps_per_unit=2 ** 12, seed=0)
    fit = fit_small_time_slope(curve, predicted=0.5)
    record("AC4", fit.passed, f"slope {fit.slope:.4f} vs 0.5 +- 0.07 (predicted {pred.exponent:.4f})", t0)


def test_ac5_large_time_exponent():
    t0 = time.time()
    spec = load_preset("AC5")
    pred = large_time_exponent(spec, 1.0)
    t_grid = 2.0 ** np.arange(0, 7)
    curve = estimate_sup_moment(spec, 0.0, 1.0, t_grid, 20_000, steps_per_unit=64, seed=0)
    fit = fit_large_time_slope(curve, window=(1.0, 64.0), predicted=2 / 3)
    record("AC5", fit.passed, f"slope {fit.slope:.4f} vs 2/3 +- 0.07 (predicted {pred.exponent:.4f})", t0)


def test_ac6_explicit_constant_dominance():
    t0 = time.time()
    spec = load_preset("AC6")
    t_grid = 2.0 ** np.arange(-8, 1)
    env = envelope(spec, "BV_small_beta", 0.5, t_grid, alpha=0.5, beta=0.0)
    curve = estimate_sup_moment(spec, 0.0, 0.5, t_grid, 100_000, steps_per_unit=2 ** 10, seed=0)
    excess = (curve.estimates - env.value) / np.where(curve.std_errors > 0, curve.std_errors, 1.0)
    ok = bool(np.all(curve.estimates <= env.value + 3 * curve.std_errors)) and not env.symbolic_constant
    record("AC6", ok, f"max (estimate - bound)/SE = {excess.max():.2f} (tol +3); bound t*{env.value[-1]:.4f}",
           t0)


def test_ac7_gbm_endpoint_moment():
    t0 = time.time()
    est = estimate_endpoint_moment(load_preset("AC7"), 1.0, "monomial:2", 1.0, 100_000,
                                   steps_per_unit=2 ** 12, seed=0)
    target = math.e - 1
    ok = abs(est.mean - target) <= 3 * est.se and abs(est.mean - target) <= 0.05 * target
    record("AC7", ok, f"E(X_1-1)^2 = {est.mean:.4f} +- {est.se:.4f} vs e-1 = {target:.4f}", t0)


def test_ac8_wald_identity():
    t0 = time.time()
    rep = wald_check(load_preset("AC8"), 0.0, 5.0, 10.0, 100_000, steps_per_unit=64, seed=0)
    d = rep.details
    record("AC8", rep.passed, f"mean X(tau^T) - x0 = {d['mean']:.4f}, SE {d['se']:.4f} (tol 3 SE); "
                              f"capped fraction {d['fraction_capped']:.3f}", t0)


def test_ac9_subadditivity():
    t0 = time.time()
    rep = subadditivity_check(load_preset("AC9"), 0.5, (0.25, 0.5, 1.0), 20_000, steps_per_unit=256, seed=0)
    d = rep.details
    record("AC9", rep.passed, f"worst f(t+s)-f(t)-f(s) = {d['worst_violation']:.4f} at {d['pair']}, "
                              f"combined SE {d['combined_se']:.4f} (tol 3 SE)", t0)


def test_ac10_determinism_and_monotonicity():
    t0 = time.time()
    problems = []
    cfg = SimConfig(t_end=1.0, n_steps=128, seed=2024)
    for name in preset_names():
        spec = load_preset(name)
        x0 = 1.0 if name == "AC7" else 0.0
        a = simulate_paths(spec, x0, cfg, 200)
        b = simulate_paths(spec, x0, cfg, 200)
        if not (np.array_equal(a.states, b.states) and np.array_equal(a.running_sup, b.running_sup)):
            problems.append(f"{name}: skeletons differ")
        for kappa in (0.5, 1.0):
            c = estimate_sup_moment(spec, x0, kappa, [0.125, 0.25, 0.5, 1.0], 500, steps_per_unit=128, seed=1)
            if np.any(np.diff(c.estimates) < 0):
                problems.append(f"{name}: curve decreases at kappa {kappa}")
        ones = estimate_sup_moment(spec, x0, 0.0, [0.5, 1.0], 10)
        if not np.all(ones.estimates == 1.0):
            problems.append(f"{name}: kappa=0 curve is not 1")
        if not np.all(symbol(spec, np.linspace(-10, 10, 41), 0.0) == 0.0):
            problems.append(f"{name}: q(x,0) != 0")
    record("AC10", not problems, "; ".join(problems) or "all presets: identical skeletons, monotone curves, "
                                                       "unit kappa=0 curves, q(x,0)=0", t0)
