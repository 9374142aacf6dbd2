"""Oracle deviation from the factorization law versus the perturbation parameter.

Two-mode quarton-like system; prints lambda*, the diagonalized and analytic
cross-Kerr, their relative deviation and the truncation where it converged.
"""

import argparse

import numpy as np

from kerrlaw import fock
from kerrlaw.errors import StrongMixing


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omega-a", type=float, default=5.12e9)
    ap.add_argument("--omega-b", type=float, default=5.38e9)
    ap.add_argument("--phi-a", type=float, default=0.361)
    ap.add_argument("--phi-b", type=float, default=0.353)
    ap.add_argument("--min", dest="lo", type=float, default=1e-5)
    ap.add_argument("--max", dest="hi", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()

    print("lambda_star,chi_full_hz,chi_analytic_hz,rel_dev,dim,converged")
    for lam in np.geomspace(args.lo, args.hi, args.points):
        system = fock.cross_kerr_system(args.omega_a, args.omega_b, args.phi_a, args.phi_b, lam)
        try:
            r = fock.verify_rwa_reduction(system)
        except StrongMixing as exc:
            print(f"{lam:.4g},,,,,strong-mixing {exc.label}")
            continue
        print(f"{lam:.4g},{r.chi_full:.10g},{r.chi_analytic:.10g},{r.rel_dev:.4e},{r.dim},{r.converged}")


if __name__ == "__main__":
    main()
