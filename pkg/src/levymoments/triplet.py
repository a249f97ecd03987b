"""State-dependent Levy triplets (b(x), Q(x), N(x, dy)) in dimension one.

A :class:`ProcessSpec` bundles a drift expression, a diffusion expression and
a :class:`JumpKernel` drawn from a closed parametric catalog.  Because the
catalog is closed, divergence of every kernel moment is decided by exponent
arithmetic, never by watching a quadrature overflow.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar

from . import quadrature
from .errors import ParameterDomainError, SpecError
from .expressions import Expr

FAMILIES = ("SymmetricStable", "TemperedStable", "CompoundPoisson", "None")
LAWS = ("Gaussian", "TwoPoint", "Uniform")
COMPENSATIONS = ("standard", "none", "full")
REGIONS = ("Inner", "Outer", "All")

_NUMERIC = {
    "SymmetricStable": ("order", "scale"),
    "TemperedStable": ("order", "scale", "tempering"),
    "CompoundPoisson": ("rate", "mu", "sigma", "a"),
    "None": (),
}
_LAW_PARAMS = {"Gaussian": ("mu", "sigma"), "TwoPoint": ("a",), "Uniform": ("a",)}
_OPEN_INTERVALS = {
    "order": (0.0, 2.0),
    "scale": (0.0, math.inf),
    "tempering": (0.0, math.inf),
    "rate": (0.0, math.inf),
    "sigma": (0.0, math.inf),
    "a": (0.0, math.inf),
    "mu": (-math.inf, math.inf),
}

# grid used for suprema over "all of space"
DEFAULT_GRID_POINTS = 10_000
DEFAULT_HALF_WIDTH = 50.0


def stable_density_constant(alpha):
    """Density coefficient c with  int (1 - cos(y xi)) c |y|^(-1-alpha) dy = |xi|^alpha.

    c_alpha = Gamma(1 + alpha) sin(pi alpha / 2) / pi; equals 1/pi for the
    Cauchy case.
    """
    alpha = np.asarray(alpha, dtype=float)
    return special.gamma(1.0 + alpha) * np.sin(np.pi * alpha / 2.0) / np.pi


def _region_bounds(region, truncate=math.inf):
    if region == "Inner":
        a, b = 0.0, 1.0
    elif region == "Outer":
        a, b = 1.0, math.inf
    elif region == "All":
        a, b = 0.0, math.inf
    else:
        raise ValueError(f"unknown region {region!r}")
    return a, min(b, truncate)


@dataclass(frozen=True)
class JumpKernel:
    """Parametric jump kernel N(x, dy).

    ``family``      one of SymmetricStable, TemperedStable, CompoundPoisson, None
    ``params``      numeric/static parameters (see ``_NUMERIC``); CompoundPoisson
                    carries ``law`` in {Gaussian, TwoPoint, Uniform}
    ``modulation``  parameter name -> :class:`Expr` replacing the constant value
    ``compensation`` symbol convention: ``standard`` (1 - e^{iy xi} + i y xi 1_{|y|<=1}),
                    ``none`` (bounded-variation form) or ``full`` (martingale form)
    ``truncate``    optional radius R: the kernel is restricted to |y| <= R

    Stable densities are c |y|^(-1-alpha); with ``normalized`` the coefficient
    is ``scale * stable_density_constant(order)`` so the jump symbol is
    ``scale * |xi|^order``.
    """

    family: str = "None"
    params: tuple = field(default=())
    modulation: tuple = field(default=())
    compensation: str = "standard"
    truncate: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}", "kernel.family")
        if self.compensation not in COMPENSATIONS:
            raise SpecError(f"unknown compensation {self.compensation!r}", "kernel.compensation")
        params = dict(self.params)
        mods = dict(self.modulation)
        for k, v in mods.items():
            if not isinstance(v, Expr):
                mods[k] = Expr.from_dict(v)
        allowed = set(_NUMERIC[self.family])
        if self.family == "SymmetricStable":
            params["normalized"] = bool(params.get("normalized", False))
            allowed |= {"normalized"}
        if self.family == "CompoundPoisson":
            law = params.get("law")
            if law not in LAWS:
                raise SpecError(f"law must be one of {LAWS}, got {law!r}", "kernel.params.law")
            allowed = {"rate", "law", *_LAW_PARAMS[law]}
        extra = (set(params) | set(mods)) - allowed
        if extra:
            raise SpecError(f"unexpected parameters {sorted(extra)}", "kernel.params")
        for name in allowed - {"law", "normalized"}:
            if name not in params and name not in mods:
                raise SpecError(f"missing parameter {name!r}", "kernel.params")
        for name in list(params):
            if name not in ("law", "normalized"):
                params[name] = float(params[name])
        if self.truncate is not None:
            if self.family not in ("SymmetricStable", "TemperedStable"):
                raise SpecError("truncate only applies to stable families", "kernel.truncate")
            if not self.truncate > 0:
                raise ParameterDomainError("truncate radius must be positive")
            object.__setattr__(self, "truncate", float(self.truncate))
        object.__setattr__(self, "params", tuple(sorted(params.items())))
        object.__setattr__(self, "modulation", tuple(sorted(mods.items())))
        self._check_domain()

    # -- parameter access -------------------------------------------------
    @property
    def law(self):
        return dict(self.params).get("law")

    @property
    def normalized(self):
        return bool(dict(self.params).get("normalized", False))

    @property
    def numeric_names(self):
        if self.family == "CompoundPoisson":
            return ("rate", *_LAW_PARAMS[self.law])
        return _NUMERIC[self.family]

    @property
    def is_modulated(self):
        return any(not e.is_constant for _, e in self.modulation)

    @property
    def radius(self):
        return math.inf if self.truncate is None else self.truncate

    def param_range(self, name, lo=-math.inf, hi=math.inf):
        mods = dict(self.modulation)
        if name in mods:
            return mods[name].range(lo, hi)
        v = dict(self.params)[name]
        return v, v

    def params_at(self, x):
        """Numeric parameters evaluated at state(s) x (arrays shaped like x)."""
        x = np.asarray(x, dtype=float)
        mods = dict(self.modulation)
        static = dict(self.params)
        out = {}
        for name in self.numeric_names:
            if name in mods:
                out[name] = mods[name](x)
            else:
                out[name] = np.full_like(x, static[name])
        return out

    def _check_domain(self):
        for name in self.numeric_names:
            lo_ok, hi_ok = _OPEN_INTERVALS[name]
            lo, hi = self.param_range(name)
            if not (lo > lo_ok and hi < hi_ok) and name != "mu":
                raise ParameterDomainError(
                    f"{self.family}.{name} must stay in ({lo_ok:g}, {hi_ok:g}); range is [{lo:g}, {hi:g}]"
                )
            if name == "mu" and not (math.isfinite(lo) and math.isfinite(hi)):
                raise ParameterDomainError("CompoundPoisson.mu must be bounded")
        if self.compensation == "none" and self.infinite_activity:
            _, a_hi = self.param_range("order")
            if a_hi >= 1.0:
                raise SpecError("bounded-variation form needs order < 1 everywhere", "kernel.compensation")
        if self.compensation == "full" and self.family == "SymmetricStable" and self.truncate is None:
            a_lo, _ = self.param_range("order")
            if a_lo <= 1.0:
                raise SpecError("martingale form needs a finite first moment (order > 1)", "kernel.compensation")

    # -- structural facts -------------------------------------------------
    @property
    def infinite_activity(self):
        return self.family in ("SymmetricStable", "TemperedStable")

    @property
    def symmetric(self):
        if self.family != "CompoundPoisson" or self.law != "Gaussian":
            return True
        lo, hi = self.param_range("mu")
        return lo == 0.0 and hi == 0.0

    def density_coefficient(self, pv):
        """Effective c of the density c |y|^(-1-alpha) [e^(-lambda |y|)]."""
        if self.family == "SymmetricStable" and self.normalized:
            return pv["scale"] * stable_density_constant(pv["order"])
        return pv["scale"]

    def outer_threshold(self, lo=-math.inf, hi=math.inf):
        """Infimum over states of the exponent p where int_{|y|>1} |y|^p N diverges."""
        if self.family == "SymmetricStable" and self.truncate is None:
            return self.param_range("order", lo, hi)[0]
        return math.inf

    def inner_threshold(self, lo=-math.inf, hi=math.inf):
        """Supremum over states of the exponent p at or below which the inner integral diverges."""
        if self.infinite_activity:
            return self.param_range("order", lo, hi)[1]
        return -math.inf

    # -- moments ----------------------------------------------------------
    def fractional_moment(self, x, p, region="All", method="auto"):
        """int_region |y|^p N(x, dy), vectorized over x; inf where divergent."""
        if p < 0:
            raise ParameterDomainError("exponent p must be >= 0")
        if region not in REGIONS:
            raise ValueError(f"region must be one of {REGIONS}")
        x = np.asarray(x, dtype=float)
        if self.family == "None":
            return np.zeros_like(x)
        pv = self.params_at(x)
        a, b = _region_bounds(region, self.radius)
        if self.family == "CompoundPoisson":
            return self._cp_moment(pv, p, region, a, b)
        return self._stable_moment(pv, p, a, b, method)

    def _stable_moment(self, pv, p, a, b, method):
        c = self.density_coefficient(pv)
        s = p - pv["order"]
        out = np.empty(np.shape(s))
        flat_s = np.ravel(s)
        flat_c = np.ravel(c)
        lam = np.ravel(pv["tempering"]) if self.family == "TemperedStable" else None
        res = out.reshape(-1)
        for i, si in enumerate(flat_s):
            if b <= a:
                res[i] = 0.0
                continue
            if a == 0.0 and si <= 0.0:
                res[i] = math.inf
                continue
            if lam is None:
                if math.isinf(b) and si >= 0.0:
                    res[i] = math.inf
                elif si == 0.0:
                    res[i] = 2 * flat_c[i] * math.log(b / a)
                else:
                    res[i] = 2 * flat_c[i] * ((b ** si if math.isfinite(b) else 0.0) - a ** si) / si
                continue
            li = lam[i]
            if method == "quadrature" or (method == "auto" and si <= 0.0):
                g = lambda y, li=li: math.exp(-li * y)
                res[i] = 2 * flat_c[i] * quadrature.power_integral(si, g, a, b)
            else:
                if si <= 0.0:
                    raise ValueError("closed form needs p > order")
                res[i] = 2 * flat_c[i] * _lower_gamma_between(si, li, a, b)
        return out if out.shape else float(out)

    def _cp_moment(self, pv, p, region, a, b):
        rate = pv["rate"]
        law = self.law
        if law == "TwoPoint":
            amp = pv["a"]
            if region == "Inner":
                inside = amp <= 1.0
            elif region == "Outer":
                inside = amp > 1.0
            else:
                inside = np.ones_like(amp, dtype=bool)
            return np.where(inside, rate * amp ** p, 0.0)
        if law == "Uniform":
            amp = pv["a"]
            hi = np.minimum(b, amp)
            lo = np.minimum(a, amp)
            return rate * (hi ** (p + 1) - lo ** (p + 1)) / ((p + 1) * amp)
        # Gaussian: quadrature per state
        mu = np.ravel(pv["mu"])
        sig = np.ravel(pv["sigma"])
        rr = np.ravel(rate)
        out = np.empty(mu.shape)
        for i in range(mu.size):
            out[i] = rr[i] * _gauss_abs_moment(mu[i], sig[i], p, a, b)
        return out.reshape(np.shape(rate)) if np.ndim(rate) else float(out[0])

    def first_moment(self, x, region):
        """Signed int_region y N(x, dy); zero for symmetric kernels."""
        x = np.asarray(x, dtype=float)
        if self.symmetric or self.family != "CompoundPoisson":
            return np.zeros_like(x)
        pv = self.params_at(x)
        mu, sig, rate = pv["mu"], pv["sigma"], pv["rate"]
        lo, hi = (-1.0 - mu) / sig, (1.0 - mu) / sig
        inner = mu * (special.ndtr(hi) - special.ndtr(lo)) + sig * (_phi(lo) - _phi(hi))
        if region == "Inner":
            return rate * inner
        if region == "Outer":
            return rate * (mu - inner)
        return rate * mu

    def total_mass(self, x, region="All"):
        """N(x, region); inf for infinite-activity kernels touching 0."""
        return self.fractional_moment(x, 0.0, region)

    def integrate(self, x, g, region="Outer"):
        """int_region g(y) N(x, dy) at a single state x by quadrature (g >= 0)."""
        x = float(x)
        if self.family == "None":
            return 0.0
        pv = {k: float(v) for k, v in self.params_at(x).items()}
        a, b = _region_bounds(region, self.radius)
        if b <= a:
            return 0.0
        if self.family == "CompoundPoisson":
            rate = pv["rate"]
            if self.law == "TwoPoint":
                amp = pv["a"]
                ok = (amp <= 1.0) if region == "Inner" else (amp > 1.0 if region == "Outer" else True)
                return rate * 0.5 * (g(amp) + g(-amp)) if ok else 0.0
            if self.law == "Uniform":
                amp = pv["a"]
                hi = min(b, amp)
                lo = min(a, amp)
                if hi <= lo:
                    return 0.0
                f = lambda y: g(y) + g(-y)
                return rate / (2 * amp) * quadrature.plain(f, lo, hi)
            mu, sig = pv["mu"], pv["sigma"]
            dens = lambda y: math.exp(-0.5 * ((y - mu) / sig) ** 2) / (sig * math.sqrt(2 * math.pi))
            f = lambda y: (g(y) * dens(y) + g(-y) * dens(-y))
            top = min(b, abs(mu) + 40 * sig)
            if top <= a:
                return 0.0
            return rate * quadrature.plain(f, a, top, points=[abs(mu)])
        c = float(self.density_coefficient(pv))
        alpha = pv["order"]
        lam = pv.get("tempering", 0.0)
        f = lambda y: (g(y) + g(-y)) * math.exp(-lam * y)
        return c * quadrature.power_integral(-alpha, f, a, b)

    # -- serialization ----------------------------------------------------
    def to_dict(self):
        d = {
            "family": self.family,
            "params": dict(self.params),
            "modulation": {k: e.to_dict() for k, e in self.modulation},
            "compensation": self.compensation,
        }
        if self.truncate is not None:
            d["truncate"] = self.truncate
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("kernel must be an object", "kernel")
        unknown = set(d) - {"family", "params", "modulation", "compensation", "truncate"}
        if unknown:
            raise SpecError(f"unknown fields {sorted(unknown)}", "kernel")
        mods = {k: Expr.from_dict(v) for k, v in (d.get("modulation") or {}).items()}
        return cls(
            family=d.get("family", "None"),
            params=tuple((d.get("params") or {}).items()),
            modulation=tuple(mods.items()),
            compensation=d.get("compensation", "standard"),
            truncate=d.get("truncate"),
        )


def _phi(z):
    return np.exp(-0.5 * np.asarray(z) ** 2) / math.sqrt(2 * math.pi)


def _lower_gamma_between(s, lam, a, b):
    """int_a^b y^(s-1) e^(-lam y) dy for s > 0 via regularized incomplete gammas."""
    g = special.gamma(s) * lam ** (-s)
    if a == 0.0:
        return g * (special.gammainc(s, lam * b) if math.isfinite(b) else 1.0)
    upper_a = special.gammaincc(s, lam * a)
    upper_b = special.gammaincc(s, lam * b) if math.isfinite(b) else 0.0
    return g * (upper_a - upper_b)


def _gauss_abs_moment(mu, sig, p, a, b):
    """E|J|^p 1{a <(=) |J| <= b} for J ~ N(mu, sig^2)."""
    dens = lambda y: math.exp(-0.5 * ((y - mu) / sig) ** 2) / (sig * math.sqrt(2 * math.pi))
    f = lambda y: y ** p * (dens(y) + dens(-y))
    top = min(b, abs(mu) + 40 * sig)
    if top <= a:
        return 0.0
    return quadrature.plain(f, a, top, points=[abs(mu)])


@dataclass(frozen=True)
class Flags:
    bounded_coefficients: bool = True
    martingale_type: bool = False
    pure_jump: bool = False

    def to_dict(self):
        return {
            "bounded_coefficients": self.bounded_coefficients,
            "martingale_type": self.martingale_type,
            "pure_jump": self.pure_jump,
        }


@dataclass(frozen=True)
class ProcessSpec:
    """A one-dimensional Levy-type triplet with declared structural flags.

    ``diffusion`` is the variance coefficient Q(x) (not its square root).
    """

    drift: Expr = field(default_factory=lambda: Expr.constant(0.0))
    diffusion: Expr = field(default_factory=lambda: Expr.constant(0.0))
    kernel: JumpKernel = field(default_factory=JumpKernel)
    flags: Flags = field(default_factory=Flags)
    name: str = ""
    dimension: int = 1

    def __post_init__(self):
        if self.dimension != 1:
            raise SpecError("only dimension 1 is supported", "dimension")
        q_lo, _ = self.diffusion.range()
        if q_lo < 0:
            raise SpecError("Q(x) must be >= 0 for every x", "diffusion")
        f = self.flags
        if f.bounded_coefficients and not (self.drift.is_bounded and self.diffusion.is_bounded):
            raise SpecError("bounded_coefficients set but drift/diffusion is unbounded", "flags")
        if f.martingale_type:
            if not (_is_zero(self.drift) and _is_zero(self.diffusion)):
                raise SpecError("martingale_type requires b = 0 and Q = 0", "flags")
            if self.kernel.family == "None":
                raise SpecError("martingale_type requires a jump kernel", "flags")
            if self.kernel.compensation != "full":
                raise SpecError("martingale_type requires compensation 'full'", "flags")
        if f.pure_jump and not (_is_zero(self.drift) and _is_zero(self.diffusion)):
            raise SpecError("pure_jump requires b = 0 and Q = 0", "flags")

    @property
    def is_constant(self):
        """True when the triplet does not depend on x (a Levy process)."""
        return self.drift.is_constant and self.diffusion.is_constant and not self.kernel.is_modulated

    @property
    def exprs(self):
        return (self.drift, self.diffusion, *(e for _, e in self.kernel.modulation))

    def standard_drift(self, x):
        """Drift in the standard (truncation at |y| = 1) convention."""
        x = np.asarray(x, dtype=float)
        b = self.drift(x)
        comp = self.kernel.compensation
        if comp == "none":
            return b + self.kernel.first_moment(x, "Inner")
        if comp == "full":
            return b - self.kernel.first_moment(x, "Outer")
        return b

    # -- serialization ----------------------------------------------------
    def to_dict(self):
        d = {
            "drift": self.drift.to_dict(),
            "diffusion": self.diffusion.to_dict(),
            "kernel": self.kernel.to_dict(),
            "flags": self.flags.to_dict(),
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("spec must be a JSON object")
        unknown = set(d) - {"drift", "diffusion", "kernel", "flags", "name", "dimension"}
        if unknown:
            raise SpecError(f"unknown top-level fields {sorted(unknown)}")
        flags = d.get("flags") or {}
        bad = set(flags) - {"bounded_coefficients", "martingale_type", "pure_jump"}
        if bad:
            raise SpecError(f"unknown flags {sorted(bad)}", "flags")
        try:
            drift = Expr.from_dict(d.get("drift", 0.0))
        except SpecError as exc:
            raise SpecError(str(exc), "drift") from exc
        try:
            diffusion = Expr.from_dict(d.get("diffusion", 0.0))
        except SpecError as exc:
            raise SpecError(str(exc), "diffusion") from exc
        return cls(
            drift=drift,
            diffusion=diffusion,
            kernel=JumpKernel.from_dict(d.get("kernel", {"family": "None"})),
            flags=Flags(**flags),
            name=d.get("name", ""),
            dimension=d.get("dimension", 1),
        )

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(d)

    def spec_hash(self):
        payload = self.to_dict()
        payload.pop("name", None)
        canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _is_zero(e):
    return e.is_constant and float(e(0.0)) == 0.0


def load_spec(path):
    with open(path) as fh:
        return ProcessSpec.from_json(fh.read())


# -- convenience constructors ---------------------------------------------

def brownian(q=1.0, b=0.0):
    return ProcessSpec(drift=Expr.constant(b), diffusion=Expr.constant(q), name="brownian")


def stable(alpha, scale=1.0, normalized=True, compensation="standard", **flags):
    k = JumpKernel("SymmetricStable", (("order", alpha), ("scale", scale), ("normalized", normalized)),
                   compensation=compensation)
    return ProcessSpec(kernel=k, flags=Flags(**flags), name=f"stable-{alpha:g}")


def stable_like(order_expr, scale=1.0):
    k = JumpKernel("SymmetricStable", (("scale", scale), ("normalized", True)),
                   modulation=(("order", order_expr),))
    return ProcessSpec(kernel=k, flags=Flags(pure_jump=True), name="stable-like")


def compound_poisson(rate, law, compensation="standard", drift=0.0, q=0.0, **law_params):
    k = JumpKernel("CompoundPoisson", (("rate", rate), ("law", law), *law_params.items()),
                   compensation=compensation)
    flags = {"pure_jump": drift == 0.0 and q == 0.0,
             "martingale_type": compensation == "full" and drift == 0.0 and q == 0.0}
    return ProcessSpec(drift=Expr.constant(drift), diffusion=Expr.constant(q), kernel=k,
                       flags=Flags(**flags), name=f"cp-{law}")


def gbm(mu=0.0, sigma=1.0):
    return ProcessSpec(drift=Expr.linear(0.0, mu), diffusion=Expr.quadratic(sigma ** 2),
                       flags=Flags(bounded_coefficients=False), name="gbm")


# -- operations -------------------------------------------------------------

def kernel_fractional_moment(kernel, x, p, region="All", method="auto"):
    """int over region of |y|^p N(x, dy); ``inf`` exactly when divergent.

    Closed forms for power-law and atomic families, incomplete-gamma
    identities or adaptive quadrature (singularity at 0 split out) otherwise.
    """
    val = kernel.fractional_moment(x, p, region, method)
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class CoefficientSups:
    """Suprema of the triplet's coefficients over a region.

    ``M1``      sup |b| + |Q| + int (|y|^2 ^ 1) N
    ``M2``      sup int_{|y|>1} |y|^alpha N
    ``inner``   sup int_{|y|<=1} |y|^beta N
    ``all_moment``  sup int |y|^alpha N (both regions at once)
    """

    M1: float
    M2: float
    inner: float
    all_moment: float
    alpha: float
    beta: float
    region: tuple | None
    grid_points: int
    witness: dict = field(default_factory=dict)
    drift_sup: float = 0.0
    compensated_drift_sup: float = 0.0
    outer_drift_sup: float = 0.0
    diffusion_sup: float = 0.0

    def to_dict(self):
        return {
            "M1": self.M1, "M2": self.M2, "inner": self.inner, "all_moment": self.all_moment,
            "alpha": self.alpha, "beta": self.beta,
            "region": "R" if self.region is None else list(self.region),
            "grid_points": self.grid_points,
            "drift_sup": self.drift_sup,
            "compensated_drift_sup": self.compensated_drift_sup,
            "outer_drift_sup": self.outer_drift_sup,
            "diffusion_sup": self.diffusion_sup,
            "witness": {k: list(v) if isinstance(v, tuple) else v for k, v in self.witness.items()},
        }


def search_interval(spec, region=None):
    """Finite interval on which suprema over ``region`` are attained.

    For the whole line every catalog expression is either periodic, clamped
    or constant, so one window covering all clamp breakpoints and a full
    period of every sinusoid contains the supremum.
    """
    if region is not None:
        lo, hi = float(region[0]), float(region[1])
        if lo > hi:
            raise ValueError("region must be a nonempty interval")
        return lo, hi
    half = DEFAULT_HALF_WIDTH
    for e in spec.exprs:
        p = e.p
        if e.kind == "affine_clamped" and p["slope"] != 0.0:
            for edge in (p["lower"], p["upper"]):
                half = max(half, abs((edge - p["intercept"]) / p["slope"]) + 1.0)
        if e.kind == "sinusoidal" and p["frequency"] != 0.0:
            half = max(half, 2 * math.pi / abs(p["frequency"]))
    return -half, half


def grid_sup(fun, lo, hi, n=DEFAULT_GRID_POINTS):
    """Supremum of a vectorized function on [lo, hi]: grid then bounded refinement."""
    if lo == hi:
        v = float(np.asarray(fun(np.array([lo])))[0])
        return v, lo
    xs = np.linspace(lo, hi, n)
    vals = np.asarray(fun(xs), dtype=float)
    if np.any(np.isinf(vals)):
        i = int(np.flatnonzero(np.isinf(vals))[0])
        return math.inf, float(xs[i])
    i = int(np.argmax(vals))
    best, arg = float(vals[i]), float(xs[i])
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    if b > a:
        res = minimize_scalar(lambda t: -float(np.asarray(fun(np.array([t])))[0]),
                              bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        if -res.fun > best:
            best, arg = float(-res.fun), float(res.x)
    return best, arg


def coefficient_sups(spec, region=None, alpha=1.0, beta=2.0, grid_points=DEFAULT_GRID_POINTS):
    """Suprema of the triplet coefficients over ``region`` (``None`` = the real line)."""
    k = spec.kernel
    unbounded_region = region is None or not (math.isfinite(region[0]) and math.isfinite(region[1]))
    witness = {}

    def moment(p, reg):
        return lambda xs: k.fractional_moment(xs, p, reg)

    def sup_of(fun, name):
        if spec.is_constant:
            v = float(np.asarray(fun(np.array([0.0])))[0])
            witness[name] = 0.0
            return v
        lo, hi = search_interval(spec, region if not unbounded_region else None)
        v, arg = grid_sup(fun, lo, hi, grid_points)
        witness[name] = arg
        return v

    # unbounded coefficients on an unbounded region: witness sequence x_n = n
    if unbounded_region and not (spec.drift.is_bounded and spec.diffusion.is_bounded):
        seq = tuple(float(n) for n in range(1, 11))
        witness["M1"] = seq
        M1 = math.inf
    else:
        M1 = sup_of(lambda xs: np.abs(spec.drift(xs)) + np.abs(spec.diffusion(xs))
                    + k.fractional_moment(xs, 2.0, "Inner") + k.fractional_moment(xs, 0.0, "Outer"), "M1")

    def sup_or_inf(fun, name):
        if unbounded_region and not (spec.drift.is_bounded and spec.diffusion.is_bounded) and name in (
                "drift_sup", "compensated_drift_sup", "outer_drift_sup", "diffusion_sup"):
            e = spec.diffusion if name == "diffusion_sup" else spec.drift
            if not e.is_bounded:
                witness[name] = tuple(float(n) for n in range(1, 11))
                return math.inf
        return sup_of(fun, name)

    M2 = sup_of(moment(alpha, "Outer"), "M2")
    inner = sup_of(moment(beta, "Inner"), "inner")
    all_moment = sup_of(moment(alpha, "All"), "all_moment")
    drift_sup = sup_or_inf(lambda xs: np.abs(spec.standard_drift(xs)), "drift_sup")
    # drift of the uncompensated (bounded-variation) decomposition
    comp = sup_or_inf(lambda xs: np.abs(spec.standard_drift(xs) - k.first_moment(xs, "Inner")),
                      "compensated_drift_sup")
    outer = sup_or_inf(lambda xs: np.abs(spec.standard_drift(xs) + k.first_moment(xs, "Outer")),
                       "outer_drift_sup")
    qsup = sup_or_inf(lambda xs: np.abs(spec.diffusion(xs)), "diffusion_sup")
    return CoefficientSups(
        M1=M1, M2=M2, inner=inner, all_moment=all_moment, alpha=float(alpha), beta=float(beta),
        region=None if region is None else (float(region[0]), float(region[1])),
        grid_points=grid_points, witness=witness, drift_sup=drift_sup,
        compensated_drift_sup=comp, outer_drift_sup=outer, diffusion_sup=qsup,
    )
