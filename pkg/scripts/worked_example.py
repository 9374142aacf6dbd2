"""Run the quarton worked example step by step and print every intermediate."""

import argparse
import logging
from pathlib import Path

from kerrlaw.devices import parse_device_file
from kerrlaw.pipeline import run_prediction

DEFAULT = Path(__file__).resolve().parents[1] / "src" / "kerrlaw" / "data" / "table2" / "01_quarton.dev"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("device", nargs="?", type=Path, default=DEFAULT)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    rep = run_prediction(parse_device_file(args.device))
    print(f"{rep.name} ({rep.platform})")
    for e in rep.inputs:
        print(f"  in   {e.name:16s} {e.value!s:>22} {e.unit:6s} [{e.provenance}]")
    for e in rep.intermediates:
        print(f"  step {e.name:16s} {e.value:>22.10g} {e.unit:6s} [{e.provenance}]")
    p = rep.prediction
    print(f"  chi/2pi = {p.chi_over_2pi / 1e6:.2f} MHz +- {p.abs_unc / 1e6:.2f} MHz "
          f"({100 * p.rel_unc:.1f} %), regime {p.regime.value}")
    if rep.measured:
        print(f"  measured {rep.measured[0] / 1e6:.2f} +- {rep.measured[1] / 1e6:.2f} MHz, "
              f"delta = {p.deviation_pct:.2f} %")


if __name__ == "__main__":
    main()
