"""Command-line interface: bound, simulate, estimate, verify, index, report.

Every output file starts with a run manifest (command, spec hash, config,
seed, tool version, wall clock): a top-level ``manifest`` object in JSON,
``# key: value`` comment lines in CSV.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .bounds import REGIMES, envelope, large_time_exponent, moment_exists, small_time_exponent
from .errors import (
    InapplicableCheck,
    LevyMomentsError,
    NonConvergentEstimate,
    OutsideGuaranteedRange,
    RegimeInapplicable,
    SpecError,
)
from .estimate import (
    backward_moment_check,
    estimate_endpoint_moment,
    estimate_sup_moment,
    fit_large_time_slope,
    fit_small_time_slope,
    maximal_ratio_check,
    moment_growth_check,
    subadditivity_check,
    wald_check,
)
from .functions import MOMENT_CATALOG
from .presets import load_preset, preset_names
from .simulate import SEED_ENV, SimConfig, seed_from_env, simulate_paths
from .symbol import BG_TOL, bg_index, symbol_table
from .triplet import ProcessSpec, coefficient_sups

EXIT_PASS, EXIT_FAIL, EXIT_INAPPLICABLE, EXIT_ERROR = 0, 1, 2, 3
CHECKS = ("slope-small", "slope-large", "wald", "subadd", "backward", "maximal", "growth", "bg-index")


# -- plumbing ----------------------------------------------------------------------

def _load_spec(ref):
    if os.path.exists(ref):
        with open(ref) as fh:
            return ProcessSpec.from_json(fh.read())
    if ref in preset_names():
        return load_preset(ref)
    raise SpecError(f"{ref!r} is neither a spec file nor a preset ({', '.join(preset_names())})")


def _floats(text):
    return [float(eval_number(v)) for v in str(text).split(",") if v.strip()]


def eval_number(text):
    """Parse a float, also accepting powers of two written as 2^k."""
    text = text.strip()
    if text.startswith("2^"):
        return 2.0 ** float(text[2:])
    return float(text)


def _geometric(lo, hi, per_octave=1):
    k0, k1 = math.log2(lo), math.log2(hi)
    n = int(round((k1 - k0) * per_octave)) + 1
    return 2.0 ** np.linspace(k0, k1, n)


class _Run:
    def __init__(self, args, spec=None, config=None):
        self.args = args
        self.spec = spec
        self.config = config
        self.t0 = time.time()
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")

    def manifest(self):
        return {
            "command": " ".join(["levymoments", *self.args.argv]),
            "subcommand": self.args.cmd,
            "spec_hash": None if self.spec is None else self.spec.spec_hash(),
            "spec_name": None if self.spec is None else self.spec.name,
            "config": None if self.config is None else self.config,
            "seed": self.args.seed,
            "n_paths": getattr(self.args, "paths", None),
            "version": __version__,
            "started": self.started,
            "wall_clock_s": round(time.time() - self.t0, 3),
        }

    def emit_json(self, payload):
        doc = {"manifest": self.manifest(), **payload}
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=False)
        self._write(text + "\n")

    def emit_csv(self, header, rows, extra=None):
        buf = io.StringIO()
        man = self.manifest()
        if extra:
            man.update(extra)
        for k, v in man.items():
            buf.write(f"# {k}: {json.dumps(_jsonable(v))}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        self._write(buf.getvalue())

    def _write(self, text):
        out = self.args.out
        if out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    return obj


def _config(args, t_end=1.0, n_steps=None, **kw):
    return SimConfig(t_end=t_end, n_steps=n_steps or args.steps or 1024, seed=args.seed,
                     threads=args.threads, **kw)


# -- subcommands ------------------------------------------------------------------------

def cmd_bound(args):
    spec = _load_spec(args.spec)
    run = _Run(args, spec)
    t = _floats(args.t)
    env = envelope(spec, args.regime, args.kappa, t, alpha=args.alpha, beta=args.beta, x=args.x)
    run.emit_json({"regime": env.regime, "kappa": env.kappa, "t_grid": t, "values": env.value,
                   "shape": env.shape, "exponent": env.exponent, "symbolic_constant": env.symbolic_constant,
                   "hypotheses": list(env.hypotheses), "terms": [tm.to_dict() for tm in env.terms],
                   "drift_used": env.drift_used, "log_corrected": env.log_corrected})
    return EXIT_PASS


def cmd_simulate(args):
    spec = _load_spec(args.spec)
    n_steps = args.steps or 1024
    cfg = SimConfig(t_end=args.t_end, n_steps=n_steps, seed=args.seed, threads=args.threads,
                    small_jump_mode=args.small_jumps, stable_sampler=args.stable_sampler)
    run = _Run(args, spec, cfg.to_dict())
    batch = simulate_paths(spec, args.x0, cfg, args.paths)
    if args.summary:
        xt = batch.states[:, -1]
        sup = batch.running_sup[:, -1]
        run.emit_json({"summary": {
            "t_end": args.t_end, "x0": args.x0, "mean_x": float(xt.mean()), "sd_x": float(xt.std()),
            "mean_running_sup": float(sup.mean()), "max_running_sup": float(sup.max()),
            "mean_jump_count": float(batch.jump_count.mean()), "aborted": int(batch.aborted.sum()),
            "diagnostics": batch.diagnostics}})
        return EXIT_PASS
    rows = []
    for i in range(batch.n_paths):
        for t, x, s in zip(batch.times, batch.states[i], batch.running_sup[i]):
            rows.append((i, float(t), float(x), float(s)))
    run.emit_csv(["path_id", "t", "x", "running_sup"], rows)
    return EXIT_PASS


def cmd_estimate(args):
    spec = _load_spec(args.spec)
    steps = args.steps or 1024
    if args.function:
        t = _floats(args.t)[-1]
        run = _Run(args, spec, {"t": t, "steps_per_unit": steps})
        est = estimate_endpoint_moment(spec, args.x0, args.function, t, args.paths, steps_per_unit=steps,
                                       seed=args.seed)
        run.emit_json({"endpoint_moment": est.to_dict(), "function": args.function, "t": t})
        return EXIT_PASS
    t_grid = _floats(args.t)
    run = _Run(args, spec, {"t_grid": t_grid, "steps_per_unit": steps, "kappa": args.kappa})
    curve = estimate_sup_moment(spec, args.x0, args.kappa, t_grid, args.paths, steps_per_unit=steps,
                                seed=args.seed)
    if args.format == "json":
        run.emit_json({"curve": curve.to_dict()})
    else:
        run.emit_csv(["t", "estimate", "se"], curve.rows(),
                     extra={"kappa": args.kappa, "non_convergent": curve.non_convergent})
    return EXIT_PASS


def _expected_index(spec, x):
    parts = []
    k = spec.kernel
    if float(spec.diffusion(x)) > 0:
        parts.append(2.0)
    if k.family in ("SymmetricStable", "TemperedStable"):
        parts.append(float(k.params_at(np.asarray(x))["order"]))
    if float(spec.standard_drift(x)) != 0.0:
        parts.append(1.0)
    return max(parts) if parts else 0.0


def cmd_verify(args):
    spec = _load_spec(args.spec)
    run = _Run(args, spec, {"check": args.check})
    check = args.check
    payload = {"check": check}
    try:
        if check == "bg-index":
            est = bg_index(spec, args.x0)
            expected = args.expected if args.expected is not None else _expected_index(spec, args.x0)
            passed = abs(est.beta_inf - expected) <= BG_TOL and not est.poor_fit
            payload.update(index=est.to_dict(), expected_beta_inf=expected, passed=passed)
        elif check in ("slope-small", "slope-large"):
            small = check == "slope-small"
            if small:
                pred = small_time_exponent(spec, args.x0, args.kappa)
                t_grid = _floats(args.t) if args.t else _geometric(2 ** -10, 2 ** -4)
                steps = args.steps or 2 ** 12
            else:
                pred = large_time_exponent(spec, args.kappa, x=args.x0)
                t_grid = _floats(args.t) if args.t else _geometric(1.0, 64.0)
                steps = args.steps or 64
            expected = args.expected if args.expected is not None else pred.exponent
            curve = estimate_sup_moment(spec, args.x0, args.kappa, t_grid, args.paths, steps_per_unit=steps,
                                        seed=args.seed)
            fit = (fit_small_time_slope if small else fit_large_time_slope)(
                curve, window=(float(min(t_grid)), float(max(t_grid))), predicted=expected)
            passed = fit.passed
            payload.update(prediction=pred.to_dict(), fit=fit.to_dict(), curve=curve.to_dict(), passed=passed)
        else:
            rep = _run_check(spec, args)
            passed = rep.passed
            payload.update(report=rep.to_dict(), passed=passed)
    except NonConvergentEstimate as err:
        payload.update(passed=False, error=str(err))
        run.emit_json(payload)
        return EXIT_FAIL
    except (InapplicableCheck, RegimeInapplicable, OutsideGuaranteedRange) as err:
        payload.update(passed=None, inapplicable=str(err))
        run.emit_json(payload)
        return EXIT_INAPPLICABLE
    run.emit_json(payload)
    return EXIT_PASS if passed else EXIT_FAIL


def _run_check(spec, args):
    c = args.check
    if c == "wald":
        return wald_check(spec, args.x0, args.half_width, args.horizon, args.paths,
                          steps_per_unit=args.steps or 64, seed=args.seed)
    if c == "subadd":
        t = _floats(args.t) if args.t else (0.25, 0.5, 1.0)
        return subadditivity_check(spec, args.alpha, t, args.paths, steps_per_unit=args.steps or 256,
                                   seed=args.seed, x0=args.x0)
    if c == "backward":
        t = args.horizon if args.horizon else 1.0
        s = _floats(args.t) if args.t else [t / 4, t / 2, 3 * t / 4, t]
        return backward_moment_check(spec, args.function or "power:1", args.x0, t, s, args.paths,
                                     seeds=tuple(args.seed + i for i in range(5)),
                                     steps_per_unit=args.steps or 256)
    if c == "maximal":
        t = _floats(args.t) if args.t else _geometric(2 ** -10, 2 ** -4)
        return maximal_ratio_check(spec, args.x0, args.radius, t, args.paths,
                                   steps_per_unit=args.steps or 2 ** 12, seed=args.seed)
    t = _floats(args.t) if args.t else _geometric(2 ** -6, 1.0)
    return moment_growth_check(spec, args.x0, args.n, t, args.paths, steps_per_unit=args.steps or 2 ** 12,
                               seed=args.seed)


def cmd_index(args):
    spec = _load_spec(args.spec)
    run = _Run(args, spec)
    est = bg_index(spec, args.x)
    if args.symbol_csv:
        lo, hi, n = _floats(args.xi)
        xis = np.linspace(lo, hi, int(n))
        run.emit_csv(["xi", "re_q", "im_q"], symbol_table(spec, args.x, xis),
                     extra={"x": args.x, "beta0": est.beta0, "beta_inf": est.beta_inf})
        return EXIT_PASS
    run.emit_json({"index": est.to_dict()})
    return EXIT_PASS


def cmd_report(args):
    spec = _load_spec(args.spec)
    run = _Run(args, spec)
    k = spec.kernel
    thr = k.outer_threshold()
    alpha = min(1.0, 0.5 * thr) if math.isfinite(thr) else 1.0
    sups = coefficient_sups(spec, alpha=alpha, beta=2.0)
    existence = {}
    for f in ("one", "power:1", "power:2", "exp_power:0.5", "log", "exp_linear:1"):
        if f.split(":")[0] in MOMENT_CATALOG:
            try:
                existence[f] = moment_exists(spec, f).to_dict()
            except LevyMomentsError as err:
                existence[f] = {"error": str(err)}
    index = bg_index(spec, args.x)
    regimes = {}
    for reg in REGIMES:
        try:
            env = envelope(spec, reg, min(0.5, alpha), [1.0], x=args.x)
            regimes[reg] = {"applicable": True, "exponent": env.exponent}
        except (RegimeInapplicable, ValueError) as err:
            regimes[reg] = {"applicable": False, "reason": str(err)}
    run.emit_json({"spec": spec.to_dict(), "coefficient_sups": sups.to_dict(), "moment_existence": existence,
                   "index": index.to_dict(), "regimes": regimes})
    return EXIT_PASS


# -- parser ---------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="levymoments", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, paths=10000):
        sp.add_argument("--spec", required=True, help="spec JSON file or preset name (AC1..AC10)")
        sp.add_argument("--seed", type=int, default=None, help=f"seed (default: ${SEED_ENV} or 0)")
        sp.add_argument("--paths", type=int, default=paths)
        sp.add_argument("--steps", type=int, default=None, help="time steps (per unit time for estimators)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--threads", type=int, default=1)

    b = sub.add_parser("bound", help="envelope bound of one regime")
    common(b)
    b.add_argument("--regime", required=True, choices=REGIMES)
    b.add_argument("--kappa", type=float, required=True)
    b.add_argument("--t", default="1")
    b.add_argument("--alpha", type=float, default=None)
    b.add_argument("--beta", type=float, default=None)
    b.add_argument("--x", type=float, default=0.0)

    s = sub.add_parser("simulate", help="simulate path skeletons")
    common(s, paths=10)
    s.add_argument("--x0", type=float, default=0.0)
    s.add_argument("--t-end", type=float, default=1.0)
    s.add_argument("--summary", action="store_true", help="write summary JSON instead of skeleton CSV")
    s.add_argument("--small-jumps", default="GaussianCorrection", choices=("GaussianCorrection", "Drop"))
    s.add_argument("--stable-sampler", default="exact", choices=("exact", "cutoff"))

    e = sub.add_parser("estimate", help="sup-moment curve or endpoint moment")
    common(e)
    e.add_argument("--x0", type=float, default=0.0)
    e.add_argument("--kappa", type=float, default=1.0)
    e.add_argument("--t", default="0.25,0.5,0.75,1")
    e.add_argument("--function", default=None, help="catalog function for an endpoint moment, e.g. abs_power:2")
    e.add_argument("--format", choices=("csv", "json"), default="csv")

    v = sub.add_parser("verify", help="run one statistical check")
    common(v)
    v.add_argument("--check", required=True, choices=CHECKS)
    v.add_argument("--x0", type=float, default=0.0)
    v.add_argument("--kappa", type=float, default=1.0)
    v.add_argument("--t", default=None, help="comma-separated times (check-specific default)")
    v.add_argument("--expected", type=float, default=None)
    v.add_argument("--half-width", type=float, default=5.0)
    v.add_argument("--horizon", type=float, default=10.0)
    v.add_argument("--alpha", type=float, default=0.5)
    v.add_argument("--function", default=None)
    v.add_argument("--radius", type=float, default=1.0)
    v.add_argument("--n", type=int, default=1)

    i = sub.add_parser("index", help="generalized Blumenthal-Getoor indices")
    common(i)
    i.add_argument("--x", type=float, default=0.0)
    i.add_argument("--symbol-csv", action="store_true", help="export q(x, xi) as CSV instead")
    i.add_argument("--xi", default="-10,10,201", help="lo,hi,n for the symbol table")

    r = sub.add_parser("report", help="summary of a spec: sups, existence, index, regimes")
    common(r)
    r.add_argument("--x", type=float, default=0.0)
    return p


COMMANDS = {"bound": cmd_bound, "simulate": cmd_simulate, "estimate": cmd_estimate, "verify": cmd_verify,
            "index": cmd_index, "report": cmd_report}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    args.seed = seed_from_env() if args.seed is None else args.seed
    try:
        return COMMANDS[args.cmd](args)
    except (RegimeInapplicable, OutsideGuaranteedRange) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INAPPLICABLE if args.cmd == "verify" else EXIT_ERROR
    except (SpecError, LevyMomentsError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
