"""Small-time and large-time slopes of the sup-moment curve for symmetric stable
processes across orders and moment exponents, against the predicted exponents.

    python3 scripts/exponent_sweep.py --paths 20000
"""

import argparse

import numpy as np

from levymoments import (
    estimate_sup_moment,
    fit_large_time_slope,
    fit_small_time_slope,
    large_time_exponent,
    small_time_exponent,
    stable,
)
from levymoments.errors import LevyMomentsError


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", default="0.8,1.2,1.5,1.8")
    ap.add_argument("--fractions", default="0.25,0.5,0.75", help="kappa as fractions of the order")
    ap.add_argument("--paths", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    small_t = 2.0 ** np.arange(-10, -3)
    large_t = 2.0 ** np.arange(0, 7)
    print(f"{'order':>6} {'kappa':>6} {'small':>8} {'pred':>6} {'large':>8} {'pred':>6}")
    for a in (float(v) for v in args.orders.split(",")):
        spec = stable(a)
        for frac in (float(v) for v in args.fractions.split(",")):
            k = round(frac * a, 4)
            row = [f"{a:6.2f}", f"{k:6.3f}"]
            try:
                pred = small_time_exponent(spec, 0.0, k).exponent
                c = estimate_sup_moment(spec, 0.0, k, small_t, args.paths, steps_per_unit=2 ** 12, seed=args.seed)
                row += [f"{fit_small_time_slope(c).slope:8.4f}", f"{pred:6.3f}"]
            except LevyMomentsError as err:
                row += [f"{'-':>8}", f"{'-':>6}"]
                print("  small-time:", err)
            try:
                pred = large_time_exponent(spec, k).exponent
                c = estimate_sup_moment(spec, 0.0, k, large_t, args.paths, steps_per_unit=64, seed=args.seed)
                row += [f"{fit_large_time_slope(c).slope:8.4f}", f"{pred:6.3f}"]
            except LevyMomentsError as err:
                row += [f"{'-':>8}", f"{'-':>6}"]
                print("  large-time:", err)
            print(" ".join(row), flush=True)


if __name__ == "__main__":
    main()
