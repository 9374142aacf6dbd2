"""Scan SNAIL Taylor coefficients over flux and locate the Kerr-free bias."""

import argparse

import numpy as np

from kerrlaw.core import EnergyScale
from kerrlaw.errors import NoKerrFreePoint
from kerrlaw.kernels import sc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=0.29)
    ap.add_argument("--EJ", type=float, default=6e9, help="Hz")
    ap.add_argument("--points", type=int, default=51)
    args = ap.parse_args()

    EJ = EnergyScale(args.EJ)
    print("flux,phi_min,c2_over_EJ,c3_over_EJ,c4_over_EJ")
    for f in np.linspace(0.0, 0.5, args.points):
        e = sc.snail_expansion(sc.SnailSpec(args.N, args.alpha, EJ, f))
        print(f"{f:.6f},{e.phi_min:.8f},{e.c2 / args.EJ:.8e},{e.c3 / args.EJ:.8e},{e.c4 / args.EJ:.8e}")
    try:
        root = sc.find_kerr_free_flux(args.N, args.alpha, EJ)
        print(f"# Kerr-free flux = {root:.10f} Phi0, |c4|/EJ = "
              f"{abs(sc.snail_c4(args.N, args.alpha, EJ, root)) / args.EJ:.2e}")
    except NoKerrFreePoint as exc:
        print(f"# {exc}")


if __name__ == "__main__":
    main()
