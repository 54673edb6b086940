#!/usr/bin/env python3
"""Permutohedron volume experiments.

Part 1: closed-form decay of the evenly-spaced hull-to-ball ratio against
its geometric asymptote, plus the inscribed-cube comparison.

Part 2: Monte Carlo hull-to-ball ratios for all three families (the open
volume-comparison question).  Where the orbit is small enough, the exact
qhull volume is printed next to the estimate.  At desk scale the ordering
comes out maximal < regular < normal.

Usage:
    python scripts/volume_experiments.py --samples 200000 --seed 7
"""

import argparse
import math

from permcap.families import common_norm, configuration
from permcap.geometry import helmert_matrix, orbit_matrix
from permcap.volumes import (
    ball_volume,
    cube_ratio,
    cube_ratio_asymptote,
    mc_volume_ratio,
    regular_ratio,
)


def closed_form_part():
    print("evenly-spaced hull: exact ratio vs asymptote 1.0750 * 0.7026^((q-1)/2)")
    print(f"{'q':>4} {'exact':>12} {'asymptote':>12} {'exact/asym':>11} {'cube':>12} {'cube/asym':>10}")
    for q in (4, 6, 10, 20, 50, 100):
        rr = regular_ratio(q)
        cr = cube_ratio(q)
        print(
            f"{q:>4} {rr.exact:12.4e} {rr.paper_asymptote:12.4e} {rr.ratio:11.4f} "
            f"{cr:12.4e} {cr / cube_ratio_asymptote(q):10.4f}"
        )
    print()


def exact_hull_ratio(family, q):
    try:
        from scipy.spatial import ConvexHull
    except ImportError:
        return None
    if q > 7:
        return None
    pts = orbit_matrix(configuration(family, q)) @ helmert_matrix(q)[:, 1:]
    return ConvexHull(pts).volume / ball_volume(q, common_norm(q))


def mc_part(samples, seed):
    print(f"Monte Carlo hull-to-ball ratios ({samples} samples, seed {seed})")
    print(f"{'q':>4} {'family':>8} {'estimate':>10} {'std.err':>9} {'qhull':>10}")
    for q in (4, 5, 6, 8):
        for fam in ("regular", "maximal", "normal"):
            est = mc_volume_ratio(fam, q, samples, seed)
            exact = exact_hull_ratio(fam, q)
            tail = f"{exact:10.6f}" if exact is not None else "         -"
            print(f"{q:>4} {fam:>8} {est.value:10.6f} {est.std_error:9.6f} {tail}")
    print()
    print("closed form check: regular exact ratio at q=4 is "
          f"{regular_ratio(4).exact:.6f} = 32 / {ball_volume(4, math.sqrt(5)):.6f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    closed_form_part()
    mc_part(args.samples, args.seed)


if __name__ == "__main__":
    main()
