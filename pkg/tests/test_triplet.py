import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from levymoments import (
    Expr,
    Flags,
    JumpKernel,
    ProcessSpec,
    brownian,
    coefficient_sups,
    compound_poisson,
    gbm,
    load_preset,
    preset_names,
    stable,
    stable_density_constant,
    stable_like,
)
from levymoments.errors import ParameterDomainError, SpecError


def test_stable_constant_matches_cauchy():
    # alpha = 1: density 1/(pi y^2) gives symbol |xi|
    assert stable_density_constant(1.0) == pytest.approx(1 / math.pi, rel=1e-14)


@given(st.floats(0.05, 1.95))
def test_stable_constant_reproduces_unit_symbol(alpha):
    # 2 c int_0^inf (1 - cos y) y^(-1-alpha) dy = 1
    c = stable_density_constant(alpha)
    # (1 - cos y) / y^2 is smooth; the y^(1 - alpha) singularity goes into the weight
    smooth = lambda y: (1 - math.cos(y)) / (y * y) if y > 1e-4 else 0.5 - y * y / 24
    near, _ = integrate.quad(smooth, 0, 1, weight="alg", wvar=(1 - alpha, 0.0))
    far, _ = integrate.quad(lambda y: y ** (-1 - alpha), 1, math.inf)
    osc, _ = integrate.quad(lambda y: y ** (-1 - alpha), 1, math.inf, weight="cos", wvar=1.0)
    assert 2 * c * (near + far - osc) == pytest.approx(1.0, rel=1e-6)


def test_domain_errors():
    with pytest.raises(ParameterDomainError):
        stable(2.0)
    with pytest.raises(ParameterDomainError):
        JumpKernel("TemperedStable", (("order", 0.5), ("scale", 1.0), ("tempering", 0.0)))
    with pytest.raises(SpecError):
        JumpKernel("CompoundPoisson", (("rate", 1.0), ("law", "Cauchy")))
    with pytest.raises(SpecError):
        stable(1.5, compensation="none")
    with pytest.raises(SpecError):
        stable(0.8, compensation="full")
    with pytest.raises(SpecError):
        ProcessSpec(diffusion=Expr.constant(-1.0))
    with pytest.raises(SpecError):
        ProcessSpec(drift=Expr.constant(1.0), kernel=stable(1.5).kernel, flags=Flags(pure_jump=True))
    with pytest.raises(SpecError):
        gbm().__class__(drift=Expr.linear(0.0, 1.0), flags=Flags(bounded_coefficients=True))


def test_modulated_order_must_stay_in_range():
    with pytest.raises(ParameterDomainError):
        stable_like(Expr.sinusoidal(1.5, 0.6))


@given(st.floats(0.1, 1.9), st.floats(0.1, 3.0), st.sampled_from(["Inner", "Outer"]))
def test_stable_fractional_moment_closed_form(alpha, p_frac, region):
    spec = stable(alpha, normalized=False)
    k = spec.kernel
    if region == "Inner":
        p = alpha + p_frac * (2 - alpha) / 3.0 + 1e-3
        expected = 2.0 / (p - alpha)
    else:
        p = alpha * min(p_frac / 3.0, 0.99)
        expected = 2.0 / (alpha - p)
    assert float(k.fractional_moment(0.0, p, region)) == pytest.approx(expected, rel=1e-10)


def test_divergent_moments_are_inf():
    k = stable(1.5).kernel
    assert math.isinf(float(k.fractional_moment(0.0, 1.5, "Outer")))
    assert math.isinf(float(k.fractional_moment(0.0, 1.5, "Inner")))


def test_two_point_moments():
    k = compound_poisson(2.0, "TwoPoint", a=3.0).kernel
    assert float(k.fractional_moment(0.0, 0.5, "All")) == pytest.approx(2 * math.sqrt(3))
    assert float(k.fractional_moment(0.0, 0.5, "Inner")) == 0.0
    assert float(k.first_moment(0.0, "Outer")) == 0.0


def test_gaussian_first_moment_by_quadrature():
    k = compound_poisson(1.5, "Gaussian", mu=0.5, sigma=0.7).kernel
    dens = lambda y: 1.5 * math.exp(-0.5 * ((y - 0.5) / 0.7) ** 2) / (0.7 * math.sqrt(2 * math.pi))
    inner, _ = integrate.quad(lambda y: y * dens(y), -1, 1)
    assert float(k.first_moment(0.0, "Inner")) == pytest.approx(inner, rel=1e-9)
    assert float(k.first_moment(0.0, "All")) == pytest.approx(1.5 * 0.5, rel=1e-9)


def test_standard_drift_conventions():
    k_none = compound_poisson(1.5, "Gaussian", compensation="none", drift=0.3, mu=0.5, sigma=0.7)
    k_full = compound_poisson(1.5, "Gaussian", compensation="full", drift=0.3, mu=0.5, sigma=0.7)
    m_in = float(k_none.kernel.first_moment(0.0, "Inner"))
    m_out = float(k_none.kernel.first_moment(0.0, "Outer"))
    assert float(k_none.standard_drift(0.0)) == pytest.approx(0.3 + m_in)
    assert float(k_full.standard_drift(0.0)) == pytest.approx(0.3 - m_out)


@given(st.floats(0.3, 1.9), st.floats(0.1, 5.0), st.integers(0, 2**31))
def test_json_round_trip_preserves_hash(alpha, scale, _):
    spec = stable(alpha, scale)
    again = ProcessSpec.from_json(spec.to_json())
    assert again == spec
    assert again.spec_hash() == spec.spec_hash()


def test_hash_changes_with_parameters():
    assert stable(1.5).spec_hash() != stable(1.5001).spec_hash()


def test_presets_load():
    names = preset_names()
    assert names == [f"AC{i}" for i in range(1, 11)]
    for n in names:
        spec = load_preset(n)
        assert isinstance(spec, ProcessSpec)
    assert load_preset("AC4").spec_hash() == stable(1.5).spec_hash()


def test_coefficient_sups_stable_like():
    spec = stable_like(Expr.sinusoidal(1.2, 0.3))
    sups = coefficient_sups(spec, alpha=0.8, beta=2.0)
    # int_{|y|>1} |y|^0.8 c(a) |y|^(-1-a) dy = 2 c(a) / (a - 0.8), largest at a = 0.9
    a = np.linspace(0.9, 1.5, 2001)
    expect = np.max(2 * np.array([stable_density_constant(v) for v in a]) / (a - 0.8))
    assert sups.M2 == pytest.approx(expect, rel=1e-3)
    assert math.isinf(coefficient_sups(spec, alpha=1.0).M2)


def test_brownian_sups():
    sups = coefficient_sups(brownian(2.0, 0.5))
    assert sups.M1 == pytest.approx(2.5)
    assert sups.M2 == 0.0


KERNELS = [
    stable(1.5).kernel,
    JumpKernel("TemperedStable", (("order", 0.8), ("scale", 1.0), ("tempering", 1.3))),
    compound_poisson(1.5, "Gaussian", mu=0.5, sigma=0.7).kernel,
    compound_poisson(2.0, "Uniform", a=2.0).kernel,
]


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.family)
@given(p=st.floats(0.0, 1.4), dp=st.floats(0.01, 0.5))
def test_fractional_moment_monotone_in_exponent(kernel, p, dp):
    # |y|^p grows with p for |y| > 1 and shrinks for |y| <= 1
    out = [float(kernel.fractional_moment(0.0, q, "Outer")) for q in (p, p + dp)]
    inn = [float(kernel.fractional_moment(0.0, q, "Inner")) for q in (p + 0.5, p + 0.5 + dp)]
    assert out[1] >= out[0] * (1 - 1e-12)
    assert inn[1] <= inn[0] * (1 + 1e-12)


@given(a1=st.floats(1.05, 1.9), a2=st.floats(1.05, 1.9))
def test_outer_moment_decreases_with_tail_index(a1, a2):
    lo, hi = sorted((a1, a2))
    m_lo = float(stable(lo, normalized=False).kernel.fractional_moment(0.0, 1.0, "Outer"))
    m_hi = float(stable(hi, normalized=False).kernel.fractional_moment(0.0, 1.0, "Outer"))
    assert m_hi <= m_lo
