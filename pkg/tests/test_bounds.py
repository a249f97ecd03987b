import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from levymoments import (
    Expr,
    JumpKernel,
    ProcessSpec,
    brownian,
    check_condition,
    compound_poisson,
    envelope,
    gbm,
    large_time_exponent,
    load_preset,
    moment_exists,
    small_time_exponent,
    stable,
    stable_like,
)
from levymoments.bounds import INDEX_SNAP, LOG_CORRECTED, REGIMES, TABLE_1
from levymoments.errors import OutsideGuaranteedRange, RegimeInapplicable, UnsupportedFunction

CP_BV = compound_poisson(2.0, "TwoPoint", compensation="none", a=3.0)
T_GRID = 2.0 ** np.arange(-8, 1)
TEMPERED_BV = ProcessSpec(kernel=JumpKernel(
    "TemperedStable", (("order", 0.5), ("scale", 1.0), ("tempering", 1.0)), compensation="none"))

# (spec, regime, alpha, beta, kappa) combinations where the regime applies
APPLICABLE = [
    (CP_BV, "BV_small_beta", 0.5, 0.0, 0.5),
    (compound_poisson(1.0, "Gaussian", compensation="none", mu=0.2, sigma=0.5), "BV_mid_beta", 0.5, 0.8, 0.4),
    (stable(1.5), "PureJump", 1.0, 1.8, 0.9),
    (load_preset("AC8"), "Martingale", 2.0, 2.0, 1.5),
    (load_preset("AC8"), "Martingale_heavy", 3.0, 2.0, 2.0),
    (TEMPERED_BV, "BV_small_beta", 0.8, 0.6, 0.3),
]


def test_table_exponents_strings():
    assert set(TABLE_1) == set(REGIMES)
    assert TABLE_1["Martingale_heavy"] == "t^(k/a) + t^(k/2)"


def test_explicit_constant_two_point():
    env = envelope(CP_BV, "BV_small_beta", 0.5, T_GRID, alpha=0.5, beta=0.0)
    # only jumps of size 3 at rate 2: sup int |y|^0.5 N = 2 sqrt 3, exponent kappa/alpha = 1
    np.testing.assert_allclose(env.value, T_GRID * 2 * math.sqrt(3), rtol=1e-12)
    assert not env.symbolic_constant
    assert env.exponent == "t^(k/a)"


@pytest.mark.parametrize("spec,regime,alpha,beta,kappa", APPLICABLE)
def test_envelope_kappa_zero_is_one(spec, regime, alpha, beta, kappa):
    env = envelope(spec, regime, 0.0, T_GRID, alpha=alpha, beta=beta)
    assert np.all(env.value == 1.0) and np.all(env.shape == 1.0)


@pytest.mark.parametrize("spec,regime,alpha,beta,kappa", APPLICABLE)
def test_envelope_nondecreasing_in_t(spec, regime, alpha, beta, kappa):
    env = envelope(spec, regime, kappa, T_GRID, alpha=alpha, beta=beta)
    assert np.all(np.diff(env.shape) >= 0)
    assert np.all(np.diff(env.value) >= 0)
    assert np.all(env.shape >= env.value)


@given(st.floats(0.0, 0.5), st.floats(0.0, 0.5), st.floats(1.0, 4.0))
def test_envelope_monotone_in_kappa_for_large_t(k1, k2, t):
    # for t >= 1 each power t^(k/a) with explicit coefficient >= 1 grows with kappa
    lo, hi = sorted((k1, k2))
    e_lo = envelope(CP_BV, "BV_small_beta", lo, [t], alpha=0.5, beta=0.0).value[0]
    e_hi = envelope(CP_BV, "BV_small_beta", hi, [t], alpha=0.5, beta=0.0).value[0]
    if lo > 0:
        assert e_hi >= e_lo - 1e-12


@pytest.mark.parametrize("spec,regime,alpha,beta,kappa", APPLICABLE)
def test_envelope_kappa_above_range_raises(spec, regime, alpha, beta, kappa):
    with pytest.raises(RegimeInapplicable, match="kappa out of range"):
        envelope(spec, regime, alpha + 0.1, T_GRID, alpha=alpha, beta=beta)


def test_envelope_infinite_moment_names_integral():
    with pytest.raises(RegimeInapplicable, match="= inf"):
        envelope(stable(0.8), "PureJump", 0.5, T_GRID, alpha=0.9, beta=1.8)


def test_envelope_unbounded_coefficients():
    with pytest.raises(RegimeInapplicable, match="bounded coefficients"):
        envelope(gbm(), "Martingale", 1.0, T_GRID, alpha=2.0, beta=2.0)


def test_symbol_growth_envelopes():
    spec = stable(1.5)
    env = envelope(spec, "SymbolGrowthSmallTime", 0.75, T_GRID)
    assert env.terms[0].exponent == pytest.approx(0.5, abs=0.02)
    assert env.symbolic_constant
    boundary = envelope(spec, "SymbolGrowthSmallTime", 1.495, T_GRID, alpha=1.5)
    assert boundary.exponent == LOG_CORRECTED and boundary.log_corrected
    large = envelope(spec, "SymbolGrowthLargeTime", 1.0, [1.0, 4.0])
    assert large.terms[0].exponent == pytest.approx(2 / 3, abs=0.02)
    with pytest.raises(RegimeInapplicable, match="kappa out of range"):
        envelope(spec, "SymbolGrowthLargeTime", 1.6, [1.0])


def test_exponent_predictions():
    assert small_time_exponent(stable(1.5), 0.0, 0.75).exponent == pytest.approx(0.5, abs=0.02)
    assert large_time_exponent(stable(1.5), 1.0).exponent == pytest.approx(2 / 3, abs=0.02)
    assert small_time_exponent(brownian(), 0.0, 1.0).exponent == pytest.approx(0.5, abs=0.02)
    p = small_time_exponent(stable(1.5), 0.0, 1.5 - INDEX_SNAP / 2)
    assert p.log_corrected and p.exponent == 1.0
    with pytest.raises(OutsideGuaranteedRange):
        small_time_exponent(stable(1.5), 0.0, 1.6)
    loose = small_time_exponent(stable(1.5), 0.0, 1.6, strict=False)
    assert not loose.guaranteed
    with pytest.raises(RegimeInapplicable):
        large_time_exponent(stable(1.5), 1.6)


def test_moment_existence():
    two = compound_poisson(2.0, "TwoPoint", a=3.0)
    res = moment_exists(two, "exp_power:1")
    assert res.exists and res.M2 == pytest.approx(2 * math.e ** 3)
    assert moment_exists(stable_like(Expr.sinusoidal(1.2, 0.3)), "power:0.8").exists
    assert not moment_exists(stable(1.5), "power:2").exists
    assert moment_exists(stable(1.5), "log").exists
    assert not moment_exists(stable(1.5), "exp_linear:1").exists
    temp = load_preset("AC2")
    assert moment_exists(temp, "exp_linear:1.2").exists
    assert not moment_exists(temp, "exp_linear:1.4").exists
    with pytest.raises(UnsupportedFunction):
        moment_exists(two, "exp_square")


def test_stable_power_moment_value():
    # int_{|y|>1} |y|^0.5 c |y|^(-2.5) = 2c, c the unit-symbol constant at 1.5
    from levymoments import stable_density_constant
    res = moment_exists(stable(1.5), "power:0.5")
    assert res.M2 == pytest.approx(2 * stable_density_constant(1.5) / 1.0, rel=1e-10)


@pytest.mark.parametrize("f,cond,holds", [
    ("power:1", "a", True),
    ("exp_power:0.5", "a", True),
    ("log", "a", True),
    ("exp_square", "a", False),
    ("exp_power:0.5", "b", True),
    ("power:1", "b", True),
    ("exp_square", "b", False),
    ("power:1", "c", True),
    ("exp_linear:1", "c", False),
    ("exp_linear:1", "d", True),
    ("exp_square", "d", False),
    ("exp_linear:1", "e", False),
    ("power:2", "d", False),
])
def test_condition_checks(f, cond, holds):
    rep = check_condition(f, cond)
    assert rep.holds is holds
    if not holds:
        assert rep.witness is not None


def test_condition_constants():
    assert check_condition("power:1", "a").constants["c"] == pytest.approx(2.0)
    b = check_condition("exp_power:0.5", "b").constants
    assert b["gamma"] == pytest.approx(0.5)
    assert b["c"] == pytest.approx(1.0, rel=1e-6)
