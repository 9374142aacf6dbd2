"""Regenerate the cross-platform validation table from a directory of device files."""

import argparse
import csv
import sys
from pathlib import Path

from kerrlaw.pipeline import TABLE_COLUMNS, validate_table

DEFAULT = Path(__file__).resolve().parents[1] / "src" / "kerrlaw" / "data" / "table2"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", type=Path, default=DEFAULT)
    ap.add_argument("--csv", type=Path, help="also write the table as CSV")
    args = ap.parse_args()

    rows = validate_table(args.directory)
    print(f"{'row':16s} {'E4/h [Hz]':>11s} {'eta':>10s} {'chi_pred':>11s} {'chi_meas':>9s} "
          f"{'delta%':>7s} {'ref%':>5s}  status")
    for r in rows:
        meas = f"{r.chi_meas_hz:9.3g}" if r.chi_meas_hz is not None else " " * 9
        delta = f"{r.delta_pct:7.2f}" if r.delta_pct is not None else " " * 7
        ref = f"{r.reference_delta:5.1f}" if r.reference_delta is not None else " " * 5
        line = f"{r.name:16s} {r.e4_hz:11.3g} {r.eta:10.3g} {r.chi_tab_hz:11.3g} {meas} {delta} {ref}  "
        print(f"{line}{r.status} {r.note}".rstrip())
    if args.csv:
        with args.csv.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=TABLE_COLUMNS)
            w.writeheader()
            for r in rows:
                w.writerow(r.as_dict())
    sys.exit(1 if any(r.status == "fail" for r in rows) else 0)


if __name__ == "__main__":
    main()
