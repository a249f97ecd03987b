"""Closed-form scalar coefficient expressions x -> value.

Drift, diffusion and kernel-parameter modulations are all drawn from this
small catalog so that ranges, Lipschitz constants and suprema are known
exactly rather than estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError

KINDS = ("constant", "linear", "affine_clamped", "sinusoidal", "quadratic")

_FIELDS = {
    "constant": ("value",),
    "linear": ("intercept", "slope"),
    "affine_clamped": ("intercept", "slope", "lower", "upper"),
    "sinusoidal": ("offset", "amplitude", "frequency", "phase"),
    "quadratic": ("coef",),
}

_DEFAULTS = {"phase": 0.0, "frequency": 1.0}


@dataclass(frozen=True)
class Expr:
    """One catalog expression.

    ``constant``        value
    ``linear``          intercept + slope * x
    ``affine_clamped``  clip(intercept + slope * x, lower, upper)
    ``sinusoidal``      offset + amplitude * sin(frequency * x + phase)
    ``quadratic``       coef * x**2
    """

    kind: str
    params: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown expression kind {self.kind!r}")
        names = _FIELDS[self.kind]
        got = dict(self.params)
        missing = [n for n in names if n not in got and n not in _DEFAULTS]
        if missing:
            raise SpecError(f"{self.kind} expression missing {missing}")
        extra = set(got) - set(names)
        if extra:
            raise SpecError(f"{self.kind} expression has unknown fields {sorted(extra)}")
        norm = tuple((n, float(got.get(n, _DEFAULTS.get(n)))) for n in names)
        for n, v in norm:
            if not math.isfinite(v):
                raise SpecError(f"{self.kind}.{n} must be finite")
        if self.kind == "affine_clamped" and dict(norm)["lower"] > dict(norm)["upper"]:
            raise SpecError("affine_clamped requires lower <= upper")
        object.__setattr__(self, "params", norm)

    # construction helpers
    @classmethod
    def constant(cls, value):
        return cls("constant", (("value", value),))

    @classmethod
    def linear(cls, intercept, slope):
        return cls("linear", (("intercept", intercept), ("slope", slope)))

    @classmethod
    def affine_clamped(cls, intercept, slope, lower, upper):
        return cls(
            "affine_clamped",
            (("intercept", intercept), ("slope", slope), ("lower", lower), ("upper", upper)),
        )

    @classmethod
    def sinusoidal(cls, offset, amplitude, frequency=1.0, phase=0.0):
        return cls(
            "sinusoidal",
            (("offset", offset), ("amplitude", amplitude), ("frequency", frequency), ("phase", phase)),
        )

    @classmethod
    def quadratic(cls, coef):
        return cls("quadratic", (("coef", coef),))

    @property
    def p(self):
        return dict(self.params)

    def __call__(self, x):
        p = self.p
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.full_like(x, p["value"])
        if self.kind == "linear":
            return p["intercept"] + p["slope"] * x
        if self.kind == "affine_clamped":
            return np.clip(p["intercept"] + p["slope"] * x, p["lower"], p["upper"])
        if self.kind == "sinusoidal":
            return p["offset"] + p["amplitude"] * np.sin(p["frequency"] * x + p["phase"])
        return p["coef"] * x * x

    def derivative(self, x):
        p = self.p
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.zeros_like(x)
        if self.kind == "linear":
            return np.full_like(x, p["slope"])
        if self.kind == "affine_clamped":
            raw = p["intercept"] + p["slope"] * x
            inside = (raw > p["lower"]) & (raw < p["upper"])
            return np.where(inside, p["slope"], 0.0)
        if self.kind == "sinusoidal":
            return p["amplitude"] * p["frequency"] * np.cos(p["frequency"] * x + p["phase"])
        return 2.0 * p["coef"] * x

    @property
    def is_constant(self):
        p = self.p
        if self.kind == "constant":
            return True
        if self.kind == "linear":
            return p["slope"] == 0.0
        if self.kind == "affine_clamped":
            return p["slope"] == 0.0 or p["lower"] == p["upper"]
        if self.kind == "sinusoidal":
            return p["amplitude"] == 0.0 or p["frequency"] == 0.0
        return p["coef"] == 0.0

    @property
    def is_bounded(self):
        if self.kind in ("constant", "affine_clamped", "sinusoidal"):
            return True
        return self.is_constant

    @property
    def lipschitz(self):
        """Global Lipschitz constant (inf for quadratic)."""
        p = self.p
        if self.kind == "constant":
            return 0.0
        if self.kind in ("linear", "affine_clamped"):
            return abs(p["slope"])
        if self.kind == "sinusoidal":
            return abs(p["amplitude"] * p["frequency"])
        return 0.0 if p["coef"] == 0.0 else math.inf

    def range(self, lo=-math.inf, hi=math.inf):
        """Exact (min, max) of the expression over [lo, hi]."""
        if lo > hi:
            raise ValueError("empty interval")
        p = self.p
        if self.is_constant:
            v = float(self(0.0 if not math.isfinite(lo) else lo))
            if self.kind == "affine_clamped" and p["slope"] != 0.0:
                v = p["lower"]
            return v, v
        if self.kind in ("linear", "affine_clamped"):
            ends = []
            for e in (lo, hi):
                if math.isfinite(e):
                    ends.append(p["intercept"] + p["slope"] * e)
                else:
                    ends.append(math.copysign(math.inf, p["slope"] * e))
            a, b = min(ends), max(ends)
            if self.kind == "affine_clamped":
                a = min(max(a, p["lower"]), p["upper"])
                b = min(max(b, p["lower"]), p["upper"])
            return a, b
        if self.kind == "quadratic":
            ends = [p["coef"] * e * e if math.isfinite(e) else math.copysign(math.inf, p["coef"])
                    for e in (lo, hi)]
            if lo <= 0.0 <= hi:
                ends.append(0.0)
            return min(ends), max(ends)
        # sinusoidal
        off, amp, w, ph = p["offset"], p["amplitude"], p["frequency"], p["phase"]
        if not (math.isfinite(lo) and math.isfinite(hi)) or abs(w) * (hi - lo) >= 2 * math.pi:
            return off - abs(amp), off + abs(amp)
        vals = [float(self(lo)), float(self(hi))]
        # interior critical points: w x + ph = pi/2 + k pi
        a, b = sorted((w * lo + ph, w * hi + ph))
        k0 = math.ceil((a - math.pi / 2) / math.pi)
        k1 = math.floor((b - math.pi / 2) / math.pi)
        for k in range(k0, k1 + 1):
            vals.append(off + amp * math.sin(math.pi / 2 + k * math.pi))
        return min(vals), max(vals)

    def to_dict(self):
        return {"kind": self.kind, **self.p}

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, (int, float)):
            return cls.constant(d)
        if not isinstance(d, dict) or "kind" not in d:
            raise SpecError("expression must be a number or an object with 'kind'")
        d = dict(d)
        kind = d.pop("kind")
        return cls(kind, tuple(d.items()))

    def describe(self):
        p = self.p
        if self.kind == "constant":
            return f"{p['value']:g}"
        if self.kind == "linear":
            return f"{p['intercept']:g} + {p['slope']:g} x"
        if self.kind == "affine_clamped":
            return f"clip({p['intercept']:g} + {p['slope']:g} x, {p['lower']:g}, {p['upper']:g})"
        if self.kind == "sinusoidal":
            return f"{p['offset']:g} + {p['amplitude']:g} sin({p['frequency']:g} x + {p['phase']:g})"
        return f"{p['coef']:g} x^2"
