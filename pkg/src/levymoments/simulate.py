"""Path skeletons of Levy and Levy-type processes with running suprema.

Each path draws its innovations from its own stream, derived from
``(seed, path_index)`` through ``numpy.random.SeedSequence``, in a fixed
layout:

1. diffusion normals (one per step, when Q is not identically 0)
2. stable uniforms (two per step, exact stable stepping only)
3. small-jump normals (one per step, cutoff jump machinery only; drawn
   in Drop mode too so both modes see the same big jumps)
4. jump candidates: a Poisson count at the dominating rate, then per
   candidate a time, an acceptance uniform and two mark uniforms.

The recursion itself is vectorized over chunks of paths.  Results depend only
on (spec, x0, config, path indices), never on chunking or thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from .errors import PathAborted, SpecError
from .triplet import stable_density_constant

SCHEMES = ("auto", "ExactLevy", "FrozenEuler")
SMALL_JUMP_MODES = ("GaussianCorrection", "Drop")
STABLE_SAMPLERS = ("exact", "cutoff")
SEED_ENV = "LEVYMOM_SEED"
NEAR_GAUSSIAN = 1e-6
DEFAULT_CHUNK = 2048


@dataclass(frozen=True)
class SimConfig:
    t_end: float = 1.0
    n_steps: int = 4096
    small_jump_cutoff: float = 1e-3
    small_jump_mode: str = "GaussianCorrection"
    seed: int = 0
    scheme: str = "auto"
    stable_sampler: str = "exact"
    record: tuple | None = None  # step indices to keep; None keeps all
    stop_outside: tuple | None = None  # freeze a path once it leaves (lo, hi)
    threads: int = 1
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be > 0")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError("n_steps must be an integer >= 1")
        if not 0.0 < self.small_jump_cutoff <= 1.0:
            raise ValueError("small_jump_cutoff must lie in (0, 1]")
        if self.small_jump_mode not in SMALL_JUMP_MODES:
            raise ValueError(f"small_jump_mode must be one of {SMALL_JUMP_MODES}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.stable_sampler not in STABLE_SAMPLERS:
            raise ValueError(f"stable_sampler must be one of {STABLE_SAMPLERS}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "n_steps", int(self.n_steps))
        object.__setattr__(self, "seed", int(self.seed))
        if self.record is not None:
            rec = tuple(sorted({int(k) for k in self.record}))
            if rec and (rec[0] < 0 or rec[-1] > self.n_steps):
                raise ValueError("record indices must lie in [0, n_steps]")
            object.__setattr__(self, "record", rec)
        if self.stop_outside is not None:
            lo, hi = (float(v) for v in self.stop_outside)
            if not lo < hi:
                raise ValueError("stop_outside must be an interval lo < hi")
            object.__setattr__(self, "stop_outside", (lo, hi))

    @property
    def h(self):
        return self.t_end / self.n_steps

    @property
    def times(self):
        return np.linspace(0.0, self.t_end, self.n_steps + 1)

    @property
    def record_indices(self):
        if self.record is None:
            return np.arange(self.n_steps + 1)
        return np.asarray(self.record, dtype=int)

    def to_dict(self):
        return {
            "t_end": self.t_end, "n_steps": self.n_steps, "small_jump_cutoff": self.small_jump_cutoff,
            "small_jump_mode": self.small_jump_mode, "seed": self.seed, "scheme": self.scheme,
            "stable_sampler": self.stable_sampler,
            "record": None if self.record is None else list(self.record),
            "stop_outside": None if self.stop_outside is None else list(self.stop_outside),
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ("record", "stop_outside"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return cls(**d)


def seed_from_env(default=0):
    """Seed from the environment variable, else ``default``."""
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else int(default)


def path_stream(seed, index):
    """Independent generator for path ``index`` (same as SeedSequence(seed).spawn()[index])."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


@dataclass
class PathSkeleton:
    times: np.ndarray
    states: np.ndarray
    running_sup: np.ndarray
    jump_count: int
    aborted: bool = False
    diagnostic: str = ""


@dataclass
class PathBatch:
    """Recorded skeletons of many paths (rows are paths)."""

    times: np.ndarray
    record_indices: np.ndarray
    states: np.ndarray
    running_sup: np.ndarray
    jump_count: np.ndarray
    exit_step: np.ndarray  # first step outside stop_outside, -1 if never
    aborted: np.ndarray
    x0: float
    config: SimConfig
    first_path: int = 0
    diagnostics: list = field(default_factory=list)

    @property
    def n_paths(self):
        return self.states.shape[0]

    def skeleton(self, i):
        return PathSkeleton(self.times, self.states[i], self.running_sup[i], int(self.jump_count[i]),
                            bool(self.aborted[i]))


# -- stable variates -----------------------------------------------------------

def stable_from_uniforms(alpha, u1, u2):
    """Standard symmetric stable (CF exp(-|xi|^alpha)) from two uniforms.

    Chambers-Mallows-Stuck transform; within NEAR_GAUSSIAN of alpha = 2 the
    same uniforms feed a Box-Muller normal with variance 2.
    """
    alpha = np.asarray(alpha, dtype=float)
    v = math.pi * (u1 - 0.5)
    w = -np.log(u2)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
             * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))
    gauss = np.sqrt(2.0 * w) * np.cos(2.0 * v) * math.sqrt(2.0)
    return np.where(np.abs(alpha - 2.0) < NEAR_GAUSSIAN, gauss, x)


def sample_stable(alpha, scale=1.0, rng=None, size=None):
    """Symmetric stable variates with characteristic function exp(-scale |xi|^alpha)."""
    if not 0.0 < float(np.max(alpha)) <= 2.0 or float(np.min(alpha)) <= 0.0:
        raise ValueError("order must lie in (0, 2]")
    rng = np.random.default_rng() if rng is None else rng
    shape = np.broadcast(np.asarray(alpha), np.asarray(scale)).shape if size is None else size
    u1 = rng.random(shape)
    u2 = rng.random(shape)
    # exclude the measure-zero endpoint u2 = 0
    u2 = np.where(u2 == 0.0, np.finfo(float).tiny, u2)
    z = stable_from_uniforms(alpha, u1, u2)
    out = np.asarray(scale) ** (1.0 / np.asarray(alpha)) * z
    return float(out) if np.ndim(out) == 0 else out


# -- jump machinery ------------------------------------------------------------

@dataclass(frozen=True)
class _JumpPlan:
    """Dominating proposal for the jumps simulated one by one."""

    kind: str  # "none", "cp", "powerlaw"
    rate: float = 0.0
    # power-law proposal pieces: (delta, 1] with order a_hi, (1, R) with order a_lo
    c_max: float = 0.0
    a_hi: float = 1.0
    a_lo: float = 1.0
    w_inner: float = 0.0
    delta: float = 1e-3
    radius: float = math.inf


def _powerlaw_mass(c, a, lo, hi):
    """int_lo^hi 2 c y^(-1-a) dy."""
    top = 0.0 if math.isinf(hi) else hi ** (-a)
    return 2.0 * c * (lo ** (-a) - top) / a


def _plan(spec, config, exact_stable):
    k = spec.kernel
    if k.family == "None" or exact_stable:
        return _JumpPlan("none")
    if k.family == "CompoundPoisson":
        return _JumpPlan("cp", rate=k.param_range("rate")[1])
    a_lo, a_hi = k.param_range("order")
    s_hi = k.param_range("scale")[1]
    if k.family == "SymmetricStable" and k.normalized:
        grid = np.linspace(a_lo, a_hi, 201)
        c_max = s_hi * float(np.max(stable_density_constant(grid)))
    else:
        c_max = s_hi
    delta = config.small_jump_cutoff
    R = k.radius
    inner = _powerlaw_mass(c_max, a_hi, delta, min(1.0, R)) if R > delta else 0.0
    outer = _powerlaw_mass(c_max, a_lo, 1.0, R) if R > 1.0 else 0.0
    rate = inner + outer
    if not math.isfinite(rate):
        raise SpecError("jump rate above the cutoff is not finite", "kernel")
    return _JumpPlan("powerlaw", rate=rate, c_max=c_max, a_hi=a_hi, a_lo=a_lo,
                     w_inner=inner / rate if rate > 0 else 0.0, delta=delta, radius=R)


def _small_jump_variance(kernel, pv, delta):
    """int_{|y|<=delta} y^2 N(x, dy) for the power-law families."""
    alpha = pv["order"]
    c = kernel.density_coefficient(pv)
    s = 2.0 - alpha
    top = min(delta, kernel.radius)
    if kernel.family == "TemperedStable":
        lam = pv["tempering"]
        return 2.0 * c * lam ** (-s) * special.gamma(s) * special.gammainc(s, lam * top)
    return 2.0 * c * top ** s / s


# -- engine ----------------------------------------------------------------------

def _resolve_scheme(spec, config):
    if config.scheme == "ExactLevy" and not spec.is_constant:
        raise SpecError("ExactLevy needs a constant triplet; use FrozenEuler", "scheme")
    k = spec.kernel
    exact_stable = (k.family == "SymmetricStable" and k.truncate is None
                    and config.stable_sampler == "exact")
    return exact_stable


class _Draws:
    """Per-path innovations of one chunk."""

    def __init__(self, n, n_steps):
        self.diff = None
        self.stab = None
        self.small = None
        self.cand_path = []
        self.cand_time = []
        self.cand_u = []


def _draw_chunk(seed, indices, n_steps, t_end, has_diff, exact_stable, has_small, plan):
    n = len(indices)
    d = _Draws(n, n_steps)
    if has_diff:
        d.diff = np.empty((n, n_steps))
    if exact_stable:
        d.stab = np.empty((2, n, n_steps))
    if has_small:
        d.small = np.empty((n, n_steps))
    lam_total = plan.rate * t_end
    for row, i in enumerate(indices):
        rng = path_stream(seed, i)
        if has_diff:
            d.diff[row] = rng.standard_normal(n_steps)
        if exact_stable:
            u = rng.random((2, n_steps))
            u[1] = np.where(u[1] == 0.0, np.finfo(float).tiny, u[1])
            d.stab[:, row, :] = u
        if has_small:
            d.small[row] = rng.standard_normal(n_steps)
        if plan.kind != "none":
            m = int(rng.poisson(lam_total))
            if m:
                d.cand_path.append(np.full(m, row, dtype=np.int64))
                d.cand_time.append(rng.random(m))
                d.cand_u.append(rng.random((3, m)))
    if plan.kind != "none" and d.cand_path:
        path = np.concatenate(d.cand_path)
        step = np.minimum((np.concatenate(d.cand_time) * n_steps).astype(np.int64), n_steps - 1)
        u = np.concatenate(d.cand_u, axis=1)
        order = np.argsort(step, kind="stable")
        d.cand_path, d.cand_step, d.cand_u = path[order], step[order], u[:, order]
        d.offsets = np.searchsorted(d.cand_step, np.arange(n_steps + 1))
    else:
        d.cand_path = np.zeros(0, dtype=np.int64)
        d.cand_step = np.zeros(0, dtype=np.int64)
        d.cand_u = np.zeros((3, 0))
        d.offsets = np.zeros(n_steps + 1, dtype=np.int64)
    return d


def _marks(spec, plan, x, u_acc, u1, u2):
    """Accepted jump sizes (0 where rejected) for candidates at frozen states x."""
    k = spec.kernel
    pv = k.params_at(x)
    if plan.kind == "cp":
        accept = u_acc * plan.rate < pv["rate"]
        law = k.law
        if law == "TwoPoint":
            y = np.where(u1 < 0.5, -pv["a"], pv["a"])
        elif law == "Uniform":
            y = pv["a"] * (2.0 * u1 - 1.0)
        else:
            y = pv["mu"] + pv["sigma"] * special.ndtri(np.clip(u1, 1e-300, 1.0))
        return np.where(accept, y, 0.0), accept
    # power-law proposal: pick the piece, invert its Pareto-type CDF
    inner_piece = u1 < plan.w_inner
    v = np.where(inner_piece, u1 / max(plan.w_inner, 1e-300), (u1 - plan.w_inner) / max(1.0 - plan.w_inner, 1e-300))
    v = np.clip(v, 0.0, 1.0)
    d = plan.delta
    top_in = min(1.0, plan.radius)
    # inner: y^(-a) uniform between d^(-a) and top_in^(-a)
    lo_a, hi_a = d ** (-plan.a_hi), top_in ** (-plan.a_hi)
    y_in = (lo_a - v * (lo_a - hi_a)) ** (-1.0 / plan.a_hi)
    top_out = 0.0 if math.isinf(plan.radius) else plan.radius ** (-plan.a_lo)
    with np.errstate(divide="ignore"):
        y_out = (1.0 - v * (1.0 - top_out)) ** (-1.0 / plan.a_lo)
    y = np.where(inner_piece, y_in, y_out)
    prop_order = np.where(inner_piece, plan.a_hi, plan.a_lo)
    alpha = pv["order"]
    c = k.density_coefficient(pv)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = (c / plan.c_max) * y ** (prop_order - alpha)
        if k.family == "TemperedStable":
            ratio = ratio * np.exp(-pv["tempering"] * y)
    accept = (u_acc < ratio) & (y <= plan.radius)
    sign = np.where(u2 < 0.5, -1.0, 1.0)
    return np.where(accept, sign * y, 0.0), accept


def _run_chunk(spec, x0, config, indices, plan, exact_stable):
    n_steps, h = config.n_steps, config.h
    k = spec.kernel
    has_diff = not (spec.diffusion.kind == "constant" and spec.diffusion.p["value"] == 0.0)
    has_small = plan.kind == "powerlaw"
    d = _draw_chunk(config.seed, indices, n_steps, config.t_end, has_diff, exact_stable, has_small, plan)
    n = len(indices)
    rec = config.record_indices
    rec_pos = np.full(n_steps + 1, -1, dtype=np.int64)
    rec_pos[rec] = np.arange(rec.size)
    states = np.empty((n, rec.size))
    sups = np.empty((n, rec.size))
    x = np.full(n, float(x0))
    run = np.zeros(n)
    jumps = np.zeros(n, dtype=np.int64)
    exit_step = np.full(n, -1, dtype=np.int64)
    aborted = np.zeros(n, dtype=bool)
    live = np.ones(n, dtype=bool)
    stop = config.stop_outside
    if rec_pos[0] >= 0:
        states[:, rec_pos[0]] = x
        sups[:, rec_pos[0]] = 0.0
    drop = config.small_jump_mode == "Drop"
    const = spec.is_constant
    if const:
        b0 = float(spec.standard_drift(0.0) - k.first_moment(0.0, "Inner"))
        q0 = float(spec.diffusion(0.0))
    for step in range(n_steps):
        if const:
            inc = np.full(n, b0 * h)
            if has_diff:
                inc += math.sqrt(q0 * h) * d.diff[:, step]
        else:
            inc = (spec.standard_drift(x) - k.first_moment(x, "Inner")) * h
            if has_diff:
                inc = inc + np.sqrt(np.maximum(spec.diffusion(x), 0.0) * h) * d.diff[:, step]
        if exact_stable:
            pv = k.params_at(x)
            alpha = pv["order"]
            s = pv["scale"] if k.normalized else pv["scale"] / stable_density_constant(alpha)
            z = stable_from_uniforms(alpha, d.stab[0, :, step], d.stab[1, :, step])
            inc = inc + (s * h) ** (1.0 / alpha) * z
        if has_small and not drop:
            var = _small_jump_variance(k, k.params_at(x), plan.delta)
            inc = inc + np.sqrt(var * h) * d.small[:, step]
        a, b = d.offsets[step], d.offsets[step + 1]
        if b > a:
            rows = d.cand_path[a:b]
            y, acc = _marks(spec, plan, x[rows], d.cand_u[0, a:b], d.cand_u[1, a:b], d.cand_u[2, a:b])
            inc = inc + np.bincount(rows, weights=y, minlength=n)
            jumps += np.bincount(rows, weights=acc & live[rows], minlength=n).astype(np.int64)
        inc = np.where(live, inc, 0.0)
        x = x + inc
        bad = ~np.isfinite(x) & ~aborted
        if np.any(bad):
            aborted |= bad
            x = np.where(bad, x - inc, x)
            live &= ~bad
        run = np.maximum(run, np.abs(x - x0))
        if stop is not None:
            out = live & ((x <= stop[0]) | (x >= stop[1]))
            exit_step[out] = step + 1
            live &= ~out
        p = rec_pos[step + 1]
        if p >= 0:
            states[:, p] = x
            sups[:, p] = run
    return states, sups, jumps, exit_step, aborted


def simulate_paths(spec, x0, config, n_paths, first_path=0):
    """Simulate paths ``first_path .. first_path + n_paths - 1`` of ``spec`` from ``x0``."""
    exact_stable = _resolve_scheme(spec, config)
    plan = _plan(spec, config, exact_stable)
    indices = np.arange(first_path, first_path + n_paths)
    chunks = [indices[i:i + config.chunk] for i in range(0, n_paths, config.chunk)]
    work = lambda idx: _run_chunk(spec, float(x0), config, idx, plan, exact_stable)
    if config.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    states, sups, jumps, exit_step, aborted = (np.concatenate([p[j] for p in parts]) for j in range(5))
    rec = config.record_indices
    diag = []
    if np.any(aborted):
        diag.append(f"{int(aborted.sum())} path(s) aborted: non-finite state")
    return PathBatch(times=config.times[rec], record_indices=rec, states=states, running_sup=sups,
                     jump_count=jumps, exit_step=exit_step, aborted=aborted, x0=float(x0), config=config,
                     first_path=int(first_path), diagnostics=diag)


def _single(spec, x0, config, path_index):
    cfg = replace(config, record=None, threads=1)
    batch = simulate_paths(spec, x0, cfg, 1, first_path=path_index)
    sk = batch.skeleton(0)
    if sk.aborted:
        raise PathAborted(f"path {path_index} reached a non-finite state")
    return sk


def simulate_levy(spec, config, path_index=0, x0=0.0):
    """One skeleton of a Levy process (constant triplet)."""
    if not spec.is_constant:
        raise SpecError("simulate_levy needs a constant triplet", "kernel")
    return _single(spec, x0, replace(config, scheme="ExactLevy"), path_index)


def simulate_levy_type(spec, x0, config, path_index=0):
    """One frozen-coefficient skeleton of a Levy-type process started at ``x0``."""
    return _single(spec, x0, replace(config, scheme="FrozenEuler"), path_index)
