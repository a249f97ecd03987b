import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from levymoments import (
    Expr,
    JumpKernel,
    ProcessSpec,
    SimConfig,
    brownian,
    compound_poisson,
    gbm,
    load_preset,
    sample_stable,
    simulate_levy,
    simulate_levy_type,
    simulate_paths,
    stable,
    stable_like,
)
from levymoments.errors import SpecError
from levymoments.simulate import path_stream, seed_from_env, stable_from_uniforms

SPECS = {
    "brownian": brownian(0.7, 0.3),
    "stable": stable(1.5),
    "stable-cutoff": stable(1.2),
    "tempered": load_preset("AC2"),
    "cp-bv": load_preset("AC6"),
    "cp-gauss": compound_poisson(1.5, "Gaussian", mu=0.5, sigma=0.7),
    "stable-like": load_preset("AC1"),
    "gbm": gbm(0.1, 0.5),
}


def _within(mean, se, target, k=4.0):
    return abs(mean - target) <= k * se


# -- variates ------------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 1.999999])
def test_stable_characteristic_function(alpha):
    x = sample_stable(alpha, 1.0, np.random.default_rng(1), 200_000)
    for xi in (0.5, 1.0, 2.0):
        c = np.cos(xi * x)
        assert _within(c.mean(), c.std() / math.sqrt(x.size), math.exp(-abs(xi) ** alpha))


def test_stable_against_scipy_levy_stable():
    # unit symbol |xi|^alpha is scipy's S1 parametrization with scale 1
    x = sample_stable(1.3, 1.0, np.random.default_rng(2), 50_000)
    ks = stats.kstest(x, stats.levy_stable(1.3, 0.0).cdf)
    assert ks.pvalue > 1e-3


@given(st.floats(0.1, 1.99), st.floats(1e-9, 1 - 1e-9), st.floats(1e-9, 1 - 1e-9))
def test_stable_from_uniforms_finite_and_symmetric(alpha, u1, u2):
    x = stable_from_uniforms(alpha, np.array([u1]), np.array([u2]))
    y = stable_from_uniforms(alpha, np.array([1 - u1]), np.array([u2]))
    assert np.all(np.isfinite(x))
    assert x[0] == pytest.approx(-y[0], rel=1e-6, abs=1e-9)


# -- determinism ---------------------------------------------------------------------

@pytest.mark.parametrize("name", list(SPECS))
def test_bit_identical_under_same_seed(name):
    spec = SPECS[name]
    cfg = SimConfig(t_end=1.0, n_steps=64, seed=11)
    a = simulate_paths(spec, 0.2, cfg, 40)
    b = simulate_paths(spec, 0.2, cfg, 40)
    assert np.array_equal(a.states, b.states) and np.array_equal(a.running_sup, b.running_sup)


@pytest.mark.parametrize("name", ["stable", "tempered", "stable-like"])
def test_independent_of_chunking_threads_and_batch(name):
    spec = SPECS[name]
    base = SimConfig(t_end=1.0, n_steps=32, seed=5, chunk=7)
    one = simulate_paths(spec, 0.0, base, 30)
    threaded = simulate_paths(spec, 0.0, SimConfig(t_end=1.0, n_steps=32, seed=5, chunk=4, threads=3), 30)
    tail = simulate_paths(spec, 0.0, base, 10, first_path=20)
    assert np.array_equal(one.states, threaded.states)
    assert np.array_equal(one.states[20:], tail.states)


def test_different_seeds_differ():
    cfg = SimConfig(n_steps=16, seed=1)
    a = simulate_paths(brownian(), 0.0, cfg, 5).states
    b = simulate_paths(brownian(), 0.0, SimConfig(n_steps=16, seed=2), 5).states
    assert not np.array_equal(a, b)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("LEVYMOM_SEED", "123")
    assert seed_from_env() == 123
    monkeypatch.delenv("LEVYMOM_SEED")
    assert seed_from_env(7) == 7


def test_path_stream_matches_spawn():
    spawned = np.random.SeedSequence(9).spawn(3)[2]
    ref = np.random.Generator(np.random.PCG64(spawned)).random(4)
    assert np.array_equal(path_stream(9, 2).random(4), ref)


# -- skeleton invariants ----------------------------------------------------------------

@pytest.mark.parametrize("name", list(SPECS))
def test_running_sup_invariants(name):
    spec = SPECS[name]
    x0 = 0.3 if name != "gbm" else 1.0
    batch = simulate_paths(spec, x0, SimConfig(n_steps=128, seed=3), 200)
    dev = np.abs(batch.states - x0)
    assert np.all(batch.states[:, 0] == x0)
    assert np.all(batch.running_sup[:, 0] == 0.0)
    assert np.all(np.diff(batch.running_sup, axis=1) >= 0)
    assert np.array_equal(batch.running_sup, np.maximum.accumulate(dev, axis=1))
    assert not batch.aborted.any()


def test_record_subset_matches_full():
    spec = SPECS["cp-gauss"]
    full = simulate_paths(spec, 0.0, SimConfig(n_steps=64, seed=4), 20)
    part = simulate_paths(spec, 0.0, SimConfig(n_steps=64, seed=4, record=(0, 16, 64)), 20)
    assert np.array_equal(part.states, full.states[:, [0, 16, 64]])
    assert np.array_equal(part.running_sup, full.running_sup[:, [0, 16, 64]])


def test_stop_outside_freezes_paths():
    cfg = SimConfig(t_end=4.0, n_steps=256, seed=8, stop_outside=(-0.5, 0.5))
    b = simulate_paths(brownian(), 0.0, cfg, 300)
    exited = b.exit_step >= 0
    assert exited.mean() > 0.9
    for i in np.flatnonzero(exited)[:50]:
        k = b.exit_step[i]
        assert abs(b.states[i, k]) >= 0.5
        assert np.all(b.states[i, k:] == b.states[i, k])


def test_single_path_helpers():
    cfg = SimConfig(n_steps=32, seed=6)
    sk = simulate_levy(stable(1.5), cfg, path_index=3)
    batch = simulate_paths(stable(1.5), 0.0, cfg, 4)
    assert np.array_equal(sk.states, batch.states[3])
    with pytest.raises(SpecError):
        simulate_levy(stable_like(Expr.sinusoidal(1.2, 0.3)), cfg)
    lt = simulate_levy_type(SPECS["stable-like"], 0.5, cfg, path_index=1)
    assert lt.states[0] == 0.5 and lt.states.size == 33


def test_config_validation_and_round_trip():
    with pytest.raises(ValueError):
        SimConfig(n_steps=0)
    with pytest.raises(ValueError):
        SimConfig(small_jump_cutoff=2.0)
    cfg = SimConfig(t_end=2.0, n_steps=10, record=(0, 5, 10), stop_outside=(-1, 1))
    assert SimConfig.from_dict(cfg.to_dict()) == cfg


# -- distributional checks ----------------------------------------------------------------

def test_brownian_moments():
    b = simulate_paths(brownian(0.7, 0.3), 0.0, SimConfig(t_end=2.0, n_steps=8, seed=1), 40_000)
    x = b.states[:, -1]
    assert _within(x.mean(), x.std() / 200, 0.6)
    assert _within(x.var(), x.var() * math.sqrt(2 / 40_000), 1.4)


def test_compound_poisson_counts_and_moments():
    spec = SPECS["cp-gauss"]
    b = simulate_paths(spec, 0.0, SimConfig(t_end=2.0, n_steps=16, seed=2), 40_000)
    n = b.jump_count
    assert _within(n.mean(), n.std() / 200, 3.0)
    x = b.states[:, -1]
    # standard compensation: E X_t = t (b_std + int y N) with b_std = 0 here would be t int_{|y|>1} y N;
    # the drift removes the inner first moment
    m_out = float(spec.kernel.first_moment(0.0, "Outer"))
    assert _within(x.mean(), x.std() / 200, 2.0 * m_out)
    assert _within(x.var(), x.var() * math.sqrt(2 / 40_000) * 1.5, 2.0 * 1.5 * (0.25 + 0.49))


def test_tempered_characteristic_function():
    spec = SPECS["tempered"]
    from levymoments import symbol
    b = simulate_paths(spec, 0.0, SimConfig(t_end=1.0, n_steps=64, seed=3), 40_000)
    x = b.states[:, -1]
    for xi in (0.5, 1.5):
        c = np.cos(xi * x)
        target = math.exp(-float(symbol(spec, 0.0, xi).real))
        assert _within(c.mean(), c.std() / 200, target)


def test_cutoff_stable_sampler_matches_exact_law():
    spec = stable(1.2)
    from dataclasses import replace
    cfg = SimConfig(t_end=1.0, n_steps=64, seed=4, stable_sampler="cutoff")
    x = simulate_paths(spec, 0.0, cfg, 20_000).states[:, -1]
    for xi in (0.5, 1.0):
        c = np.cos(xi * x)
        assert _within(c.mean(), c.std() / math.sqrt(x.size), math.exp(-xi ** 1.2))
    drop = simulate_paths(spec, 0.0, replace(cfg, small_jump_mode="Drop"), 20_000).states[:, -1]
    # common random numbers: dropping small jumps only removes a tiny Gaussian piece
    assert np.median(np.abs(drop - x)) < 0.05


def test_gbm_second_moment_direct_formula():
    mu, sigma, t = 0.2, 0.6, 1.0
    b = simulate_paths(gbm(mu, sigma), 1.0, SimConfig(t_end=t, n_steps=1024, seed=5), 20_000)
    y = (b.states[:, -1] - 1.0) ** 2
    exact = math.exp((2 * mu + sigma ** 2) * t) - 2 * math.exp(mu * t) + 1
    assert _within(y.mean(), y.std() / math.sqrt(y.size), exact)


def test_stable_like_has_no_aborts():
    b = simulate_paths(SPECS["stable-like"], 0.0, SimConfig(n_steps=256, seed=7), 1000)
    assert not b.aborted.any() and np.all(np.isfinite(b.states))
