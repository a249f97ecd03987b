"""State-dependent Blumenthal-Getoor indices of the stable-like preset across x,
compared with the variable order alpha(x) = 1.2 + 0.3 sin x.  Writes CSV to stdout.

    python3 scripts/stable_like_indices.py --points 33 > indices.csv
"""

import argparse
import csv
import math
import sys

import numpy as np

from levymoments import bg_index, load_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=33)
    args = ap.parse_args()
    spec = load_preset("AC3")
    w = csv.writer(sys.stdout)
    # beta0 takes the sup over balls of radius 1/r, which cover the whole line as r -> 0
    w.writerow(["x", "order", "beta_inf", "beta0", "poor_fit"])
    for x in np.linspace(-math.pi, math.pi, args.points):
        est = bg_index(spec, x)
        w.writerow([f"{x:.6f}", f"{1.2 + 0.3 * math.sin(x):.6f}", f"{est.beta_inf:.6f}", f"{est.beta0:.6f}",
                    est.poor_fit])


if __name__ == "__main__":
    main()
