"""Command-line front end: ``kerrlaw predict|validate|sweep|oracle-check``.

Exit codes: 0 success, 2 parse/validation error, 3 numerical error,
4 acceptance failure in ``validate`` or ``oracle-check``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from typing import Iterable, List, Sequence

from kerrlaw import fock
from kerrlaw.devices import SCHEMAS, parse_device_file, parse_quantity
from kerrlaw.errors import DeviceFileError, DomainError, KerrError, NumericalError, UnsupportedPlatform
from kerrlaw.pipeline import (
    ORACLE_THRESHOLD,
    TABLE_COLUMNS,
    oracle_check,
    run_prediction,
    sweep,
    validate_table,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4

OUTPUTS = ("table", "csv", "json-lines")

log = logging.getLogger("kerrlaw")


def fmt(v) -> str:
    """Deterministic text for a report cell."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        return float(format(v, ".12g"))
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _write_rows(out, header: Sequence[str], rows: Iterable[Sequence], style: str):
    rows = [list(r) for r in rows]
    if style == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    elif style == "json-lines":
        for r in rows:
            out.write(json.dumps({h: _jsonable(v) for h, v in zip(header, r)}) + "\n")
    else:
        cells = [list(header)] + [[fmt(v) for v in r] for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
        for k, c in enumerate(cells):
            out.write("  ".join(s.ljust(wd) for s, wd in zip(c, widths)).rstrip() + "\n")
            if k == 0:
                out.write("  ".join("-" * wd for wd in widths) + "\n")


# --- subcommands --------------------------------------------------------------


def cmd_predict(args, out) -> int:
    rep = run_prediction(parse_device_file(args.device))
    if args.output == "csv":
        cols = rep.columns()
        _write_rows(out, list(cols), [list(cols.values())], "csv")
        return EXIT_OK
    header = ["section", "name", "value", "unit", "provenance"]
    rows: List[list] = []
    for e in rep.inputs:
        rows.append(["input", e.name, e.value, e.unit, e.provenance])
    for e in rep.intermediates:
        rows.append(["step", e.name, e.value, e.unit, e.provenance])
    p = rep.prediction
    label = "K" if rep.kind == "self-kerr" else "chi"
    rows.append(["result", f"{label}/2pi", p.chi_over_2pi, "Hz", "computed"])
    rows.append(["result", "uncertainty", p.abs_unc, "Hz", "computed"])
    if rep.measured is not None:
        rows.append(["result", "measured", rep.measured[0], "Hz", "measured"])
        rows.append(["result", "measured_unc", rep.measured[1], "Hz", "measured"])
        rows.append(["result", "delta", p.deviation_pct, "%", "computed"])
    rows.append(["result", "regime", p.regime.value, "", "computed"])
    if args.output == "table":
        out.write(f"# {rep.name} ({rep.platform}, {rep.kind})\n")
    _write_rows(out, header, rows, args.output)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    rows = validate_table(args.directory)
    _write_rows(out, TABLE_COLUMNS, [list(r.as_dict().values()) for r in rows], args.output)
    failed = [r.name for r in rows if r.status == "fail"]
    if failed:
        log.error("table rows outside tolerance: %s", ", ".join(failed))
        return EXIT_ACCEPTANCE
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    dev = parse_device_file(args.device)
    key = SCHEMAS[dev.platform].get(args.param)
    if key is None or not key.sweepable:
        # let sweep() produce the error listing the sweepable keys
        header, rows = sweep(dev, args.param, 0.0, 0.0, 1)
    else:
        lo = parse_quantity(args.lo, key.kind)
        hi = parse_quantity(args.hi, key.kind)
        header, rows = sweep(dev, args.param, lo, hi, args.points)
    _write_rows(out, header, rows, args.output)
    return EXIT_OK


def cmd_oracle_check(args, out) -> int:
    dev = parse_device_file(args.device)
    chk = oracle_check(dev, args.lambda_star, dim=args.dim, threshold=args.threshold)
    r = chk.report
    header = ["name", "platform", "mode", "lambda_star", "dim", "converged",
              "chi_full_hz", "chi_analytic_hz", "rel_dev", "threshold", "status", "message"]
    row = [
        chk.name, chk.platform, chk.mode, chk.lambda_star,
        r.dim if r else None, r.converged if r else None,
        r.chi_full if r else None, r.chi_analytic if r else None, r.rel_dev if r else None,
        args.threshold, "pass" if chk.passed else "fail", chk.message,
    ]
    _write_rows(out, header, [row], args.output)
    return EXIT_OK if chk.passed else EXIT_ACCEPTANCE


# --- argument parsing -----------------------------------------------------------


def _global_flags(default: bool) -> argparse.ArgumentParser:
    # the same flags are accepted before and after the subcommand; the
    # subcommand copy uses SUPPRESS so it does not clobber an earlier value
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", choices=OUTPUTS,
                   default="table" if default else argparse.SUPPRESS,
                   help="output format (default: table)")
    p.add_argument("--quiet", action="store_true",
                   default=False if default else argparse.SUPPRESS,
                   help="log warnings and errors only")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kerrlaw",
        description="Predict Kerr coupling rates as chi/2pi = eta * E4 / h.",
        parents=[_global_flags(True)],
    )
    sub = ap.add_subparsers(dest="command", required=True)
    common = [_global_flags(False)]

    p = sub.add_parser("predict", parents=common, help="run the prediction chain for one device file")
    p.add_argument("device")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("validate", parents=common, help="regenerate the cross-platform table from a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", parents=common, help="sweep one numeric key and emit one row per point")
    p.add_argument("device")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="lo", required=True, help="start value, with unit if dimensional")
    p.add_argument("--to", dest="hi", required=True, help="end value, with unit if dimensional")
    p.add_argument("--points", type=int, default=11)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", parents=common, help="compare the law with Fock-space diagonalization")
    p.add_argument("device")
    p.add_argument("--lambda", dest="lambda_star", type=float, required=True,
                   help="perturbation parameter lambda*")
    p.add_argument("--dim", type=int, default=fock.DEFAULT_DIM, help="starting per-mode truncation")
    p.add_argument("--threshold", type=float, default=ORACLE_THRESHOLD)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def _describe(exc: KerrError) -> str:
    ctx = getattr(exc, "context", None)
    msg = str(exc)
    if ctx and ctx not in msg:
        return f"{ctx}: {msg}"
    return msg


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.func(args, out)
    except (DeviceFileError, DomainError, UnsupportedPlatform) as exc:
        log.error("%s", _describe(exc))
        return EXIT_INPUT
    except NumericalError as exc:
        log.error("numerical failure: %s", _describe(exc))
        return EXIT_NUMERICAL
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
