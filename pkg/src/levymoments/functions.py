"""Closed catalog of moment functions f: R -> (0, inf).

Every entry ships log f and f' in closed form so condition checks can work
in log-space without overflow.  ``submult_constant`` is the smallest c with
f(x + y) <= c f(x) f(y) (None when no such c exists).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedFunction

KINDS = ("one", "power", "abs_power", "monomial", "exp_power", "log", "exp_linear", "exp_square")

# kinds for which the moment-existence transfer is implemented
MOMENT_CATALOG = ("one", "power", "exp_power", "log", "exp_linear")


@dataclass(frozen=True)
class MomentFunction:
    """One catalog function.

    ``one``         1
    ``power``       |x|^p v 1
    ``abs_power``   |x|^p               (endpoint moments only)
    ``monomial``    x^n, n integer      (endpoint moments only)
    ``exp_power``   exp(|x|^p), p in (0, 1]
    ``log``         log(|x| v e)
    ``exp_linear``  exp(p x)
    ``exp_square``  exp(x^2)            (counterexample, not submultiplicative)
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedFunction(f"unknown function {self.kind!r}; catalog is {KINDS}")
        p = float(self.param)
        object.__setattr__(self, "param", p)
        if self.kind in ("power", "abs_power") and p < 0:
            raise UnsupportedFunction(f"{self.kind} needs exponent >= 0")
        if self.kind == "monomial" and (p != int(p) or p < 0):
            raise UnsupportedFunction("monomial needs a nonnegative integer degree")
        if self.kind == "exp_power" and not 0.0 < p <= 1.0:
            raise UnsupportedFunction("exp_power needs exponent in (0, 1]")

    @classmethod
    def parse(cls, text):
        """Parse ``kind`` or ``kind:param`` (e.g. ``power:2``, ``exp_power:0.5``)."""
        if isinstance(text, MomentFunction):
            return text
        kind, _, rest = str(text).partition(":")
        return cls(kind.strip(), float(rest) if rest else 0.0)

    def __str__(self):
        if self.kind in ("one", "log", "exp_square"):
            return self.kind
        return f"{self.kind}:{self.param:g}"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.param
        if self.kind == "monomial":
            return x ** int(p)
        if self.kind == "abs_power":
            return np.abs(x) ** p
        with np.errstate(over="ignore"):
            return np.exp(self.log(x))

    def log(self, x):
        """log f(x); finite where f overflows."""
        x = np.asarray(x, dtype=float)
        p = self.param
        ax = np.abs(x)
        if self.kind == "one":
            return np.zeros_like(x)
        if self.kind == "power":
            with np.errstate(divide="ignore"):
                return p * np.maximum(np.log(ax), 0.0)
        if self.kind == "abs_power":
            with np.errstate(divide="ignore"):
                return p * np.log(ax)
        if self.kind == "monomial":
            with np.errstate(divide="ignore"):
                return p * np.log(ax)
        if self.kind == "exp_power":
            return ax ** p
        if self.kind == "log":
            return np.log(np.log(np.maximum(ax, math.e)))
        if self.kind == "exp_linear":
            return p * x
        return x * x

    @property
    def differentiable(self):
        # |x|^p v 1 and log(|x| v e) have kinks; exp(|x|^p) has a cusp at 0 for p <= 1
        return self.kind in ("one", "exp_linear", "exp_square", "monomial")

    def derivative(self, x):
        """f'(x) where it exists (one-sided value at kinks)."""
        x = np.asarray(x, dtype=float)
        p = self.param
        ax = np.abs(x)
        sg = np.sign(x)
        if self.kind == "one":
            return np.zeros_like(x)
        if self.kind == "power":
            return np.where(ax > 1.0, p * sg * ax ** (p - 1.0), 0.0)
        if self.kind == "abs_power":
            with np.errstate(divide="ignore", invalid="ignore"):
                return p * sg * ax ** (p - 1.0)
        if self.kind == "monomial":
            n = int(p)
            return n * x ** (n - 1) if n else np.zeros_like(x)
        if self.kind == "exp_power":
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                return np.where(ax > 0, p * sg * ax ** (p - 1.0) * np.exp(ax ** p), np.inf)
        if self.kind == "log":
            return np.where(ax > math.e, sg / np.maximum(ax, 1.0), 0.0)
        if self.kind == "exp_linear":
            with np.errstate(over="ignore"):
                return p * np.exp(p * x)
        with np.errstate(over="ignore"):
            return 2.0 * x * np.exp(x * x)

    def log_grad_ratio(self, x):
        """|f'(x)| / f(x), computed without forming f."""
        x = np.asarray(x, dtype=float)
        p = self.param
        ax = np.abs(x)
        if self.kind == "one":
            return np.zeros_like(x)
        if self.kind == "power":
            return np.where(ax > 1.0, p / np.maximum(ax, 1.0), 0.0)
        if self.kind == "exp_power":
            with np.errstate(divide="ignore"):
                return np.where(ax > 0, p * ax ** (p - 1.0), np.inf)
        if self.kind == "log":
            lg = np.log(np.maximum(ax, math.e))
            return np.where(ax > math.e, 1.0 / (np.maximum(ax, 1.0) * lg), 0.0)
        if self.kind == "exp_linear":
            return np.full_like(x, abs(p))
        if self.kind == "exp_square":
            return 2.0 * ax
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(self.derivative(x)) / np.abs(self(x))

    @property
    def submult_constant(self):
        """Documented c with f(x+y) <= c f(x) f(y); None if not submultiplicative."""
        p = self.param
        if self.kind in ("one", "exp_linear"):
            return 1.0
        if self.kind == "power":
            # (|x+y| v 1)^p <= (2 (|x| v 1)(|y| v 1))^p, attained at x = y = 1
            return 2.0 ** p
        if self.kind == "exp_power":
            return 1.0
        if self.kind == "log":
            # log(|x+y| v e) <= log(|x| v e) + log(|y| v e) + log 2 <= (1 + log 2) lf(x) lf(y)
            return 1.0 + math.log(2.0)
        return None

    @property
    def positive(self):
        return self.kind not in ("abs_power", "monomial")


def catalog_function(text):
    return MomentFunction.parse(text)
