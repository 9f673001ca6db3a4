#!/usr/bin/env python3
"""Profile the continuous spectral density on the negative axis.

For the free problem with the square-root boundary parameter the density has
the closed form 2/(pi sqrt(-u) (e^{2 sqrt(-u)} + e^{-2 sqrt(-u)})); the
script tabulates the computed density against it, for both inversion routes
(boundary values of tau, and the eps -> 0 extrapolation), and writes a CSV.

Usage: python scripts/density_profile.py [--n 40] [--u-min -25] [--out FILE]
"""

import argparse
import math

import numpy as np

from slspectra import (
    PoleContaminatedError,
    constant_coefficient_problem,
    spectral_density,
    sqrt_param,
)


def closed_form(u: float) -> float:
    w = math.sqrt(-u)
    return 2.0 / (math.pi * w * (math.exp(2.0 * w) + math.exp(-2.0 * w)))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--u-min", type=float, default=-25.0)
    ap.add_argument("--out", default="density_profile.csv")
    args = ap.parse_args()

    problem = constant_coefficient_problem()
    tau = sqrt_param()
    # uniform in sqrt(-u) so the 1/sqrt(-u) blow-up near 0 is resolved;
    # stop short of 0 where the eps-extrapolation route is contaminated by
    # the branch point (the boundary route still works there)
    ws = np.linspace(math.sqrt(-args.u_min), 0.3, args.n)
    us = -(ws**2)

    rows = []
    print(f"{'u':>12} {'rho (boundary)':>16} {'rho (extrap)':>16} {'closed form':>16} {'rel err':>10}")
    for u in us:
        rb = spectral_density(problem, tau, float(u), method="boundary")
        try:
            re_ = spectral_density(problem, tau, float(u), method="extrapolation")
        except PoleContaminatedError:
            re_ = math.nan
        ref = closed_form(float(u))
        err = abs(rb - ref) / ref
        rows.append((float(u), rb, re_, ref, err))
        print(f"{u:12.5f} {rb:16.9e} {re_:16.9e} {ref:16.9e} {err:10.2e}")

    with open(args.out, "w") as fh:
        fh.write("u,rho_boundary,rho_extrapolation,closed_form,rel_err\n")
        for row in rows:
            fh.write(",".join("%.17g" % x for x in row) + "\n")
    print(f"\nwrote {args.out}")


if __name__ == "__main__":
    main()
