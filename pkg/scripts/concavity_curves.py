"""Tabulate G(t) against r = h(t) on the unit bidisc for a few weight choices.

For each case prints r, G and the second divided differences; a concave curve
has no positive entries, and the flat case is a straight line through 0.

    python scripts/concavity_curves.py --N 8
"""
import argparse

import numpy as np

from saitoh_lab import (
    Affine,
    Disk,
    Exponential,
    GaussianBump,
    JetTarget,
    MinL2Setup,
    MultiplierIdeal,
    ProductDomain,
    WeightSpec,
    Zero,
    concavity_report,
    g_curve,
)
from saitoh_lab.minimal_l2 import default_t_grid

BIDISC = ProductDomain((Disk(), Disk()), (0, 0))

CASES = {
    "flat, affine gain": MinL2Setup(BIDISC, (2, 2), WeightSpec.flat(2, Affine(0.5)), MultiplierIdeal((2, 2)), JetTarget.one(2)),
    "gaussian bump": MinL2Setup(
        BIDISC, (2, 2), WeightSpec((GaussianBump(0.5), GaussianBump(0.5))), MultiplierIdeal((2, 2)), JetTarget.one(2)
    ),
    "mixed, jet target": MinL2Setup(
        BIDISC,
        (4, 4),
        WeightSpec((Zero(), GaussianBump(0.5)), Exponential(1.0)),
        MultiplierIdeal((4, 4)),
        JetTarget.from_dict({(1, 1): 1.0, (0, 0): 0.5, (2, 0): 1j}),
    ),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args(argv)
    ts = default_t_grid(args.points)
    for name, s in CASES.items():
        Gs = g_curve(s, ts, args.N)
        rep = concavity_report(ts, Gs, s.weights.c)
        print(f"# {name}: max violation / G(0) = {rep.max_violation / Gs[0]:.2e}, linear = {rep.linear}")
        print("r,G,second_difference")
        sd = np.concatenate([[np.nan], rep.second_differences, [np.nan]])
        for r, g, d in zip(rep.r, rep.G, sd):
            print(f"{r:.6f},{g:.12g},{'' if np.isnan(d) else f'{d:.3e}'}")
        print()


if __name__ == "__main__":
    main()
