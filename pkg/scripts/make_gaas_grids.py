"""Write the two Gaussian mode-profile grids used by data/examples/gaas_cavity.dev."""

import argparse
from pathlib import Path

import numpy as np

from kerrlaw.kernels.photonic import FieldGrid, normalize_grid, write_field_grid

OUT = Path(__file__).resolve().parents[1] / "src" / "kerrlaw" / "data" / "examples"


def gaussian(sigma, x0=0.0):
    return lambda x, y, z: np.exp(-((x - x0) ** 2 + y**2 + (z / 1.5) ** 2) / (2 * sigma**2))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10, help="cells per axis")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()

    half = 0.6e-6
    extent = ((-half, half), (-half, half), (-1.5 * half, 1.5 * half))
    n = (args.n, args.n, args.n)
    a = normalize_grid(FieldGrid.from_function(gaussian(0.22e-6), n, extent))
    b = normalize_grid(FieldGrid.from_function(gaussian(0.25e-6, 0.05e-6), n, extent))
    write_field_grid(args.out / "gaas_mode_a.grid", a)
    write_field_grid(args.out / "gaas_mode_b.grid", b)
    print(f"wrote {args.out}/gaas_mode_[ab].grid ({args.n}^3 cells)")


if __name__ == "__main__":
    main()
