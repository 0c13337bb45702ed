"""Truncation sweep of K_hat(z0) - pi B(z0) on an annulus (unweighted kernels).

Prints one row per (z0, N): the two kernels, the gap and the change of the gap
from the previous degree, which serves as the truncation-error estimate.

    python scripts/annulus_gap_sweep.py --r-inner 0.5 --degrees 16,32,48,64,80,96
"""
import argparse
import csv
import sys

import numpy as np

from saitoh_lab import Annulus, ProductDomain, WeightSpec, bergman_kernel_at, hardy_S_kernel_at


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r-inner", type=float, default=0.5)
    ap.add_argument("--points", default="0.6,0.7,0.8")
    ap.add_argument("--degrees", default="16,24,32,48,64,80,96")
    args = ap.parse_args(argv)
    A = Annulus(0, args.r_inner, 1.0)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["z0", "N", "K_hat", "pi_B", "gap", "estimate"])
    for z0 in (float(x) for x in args.points.split(",")):
        pd = ProductDomain((A,), (z0,))
        prev = None
        for N in (int(x) for x in args.degrees.split(",")):
            K = hardy_S_kernel_at(pd, WeightSpec.flat(1), N).value
            B = np.pi * bergman_kernel_at(pd, WeightSpec.flat(1), N).value
            gap = K - B
            est = "" if prev is None else f"{abs(gap - prev):.3e}"
            w.writerow([z0, N, f"{K:.15g}", f"{B:.15g}", f"{gap:.6e}", est])
            prev = gap


if __name__ == "__main__":
    main()
