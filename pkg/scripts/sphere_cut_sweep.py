#!/usr/bin/env python3
"""Sweep transversal covectors from the singular set and record cut data.

For random starts gamma0 on the equator and random members of the transversal
family, records region, first return to the singular set, the cut-time bound,
and the landing defect |z(t0)|.  Output: sphere_cut_sweep.csv.
"""

import argparse
import csv

import numpy as np

from srgeo.pendulum import SRParams
from srgeo.sphere import (
    ar_geodesic,
    cut_bound_ar,
    cut_bound_sr,
    first_singular_return,
    project_ed,
    transversal_family,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", type=float, default=0.6)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = SRParams(args.a)
    rng = np.random.default_rng(args.seed)
    with open("sphere_cut_sweep.csv", "w", newline="") as out:
        w = csv.writer(out)
        w.writerow(["region", "t0", "bound_ar", "bound_sr", "z_defect"])
        for _ in range(args.n):
            phi = rng.uniform(0.0, 2.0 * np.pi)
            gamma0 = np.array([np.cos(phi), np.sin(phi), 0.0])
            fam = transversal_family(gamma0, params)
            ar = ar_geodesic(gamma0, fam.covector(rng.normal() * 1.2, branch=rng.choice([-1, 1])), params)
            t0 = first_singular_return(ar, params)
            z = project_ed(ar.ed, params, gamma0, t0)[2]
            w.writerow([ar.ed.region.value, repr(t0),
                        repr(cut_bound_ar(ar.ed, params)),
                        repr(cut_bound_sr(ar.ed, params)), repr(abs(float(z)))])
    print(f"wrote sphere_cut_sweep.csv ({args.n} rows)")


if __name__ == "__main__":
    main()
