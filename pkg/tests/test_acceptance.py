"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL] criterion N`` line with the
measured numbers; the lines are repeated in the pytest terminal summary.
"""

import re
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from conftest import TABLE_DIR
from kerrlaw import fock, pipeline
from kerrlaw.core import EnergyScale
from kerrlaw.devices import parse_device_file
from kerrlaw.kernels import photonic, sc

TESTS = Path(__file__).resolve().parent


def _within(value, target, tol):
    return value is not None and abs(value - target) <= tol


def test_criterion_1_worked_example(criterion):
    t0 = time.perf_counter()
    rep = pipeline.run_prediction(parse_device_file(TABLE_DIR / "01_quarton.dev"))
    elapsed = time.perf_counter() - t0
    p = rep.prediction
    checks = {
        "phi_zpf": (rep.value("phi_zpf"), 0.411, 0.001),
        "eta_analytic": (rep.value("eta_analytic"), 0.01641, 0.00002),
        "chi_MHz": (p.chi_over_2pi / 1e6, 361.0, 1.0),
        "unc_MHz": (p.abs_unc / 1e6, 13.0, 0.5),
        "delta_pct": (p.deviation_pct, 1.4, 0.1),
    }
    bad = [k for k, (v, t, tol) in checks.items() if not _within(v, t, tol)]
    ok = not bad and elapsed < 1.0
    detail = ", ".join(f"{k}={v:.6g} (target {t:g}+-{tol:g})" for k, (v, t, tol) in checks.items())
    if bad:
        detail += f"; out of tolerance: {', '.join(bad)}"
    criterion(1, "worked example", ok, f"{detail}; {elapsed * 1e3:.1f} ms")
    assert ok


def test_criterion_2_table(criterion):
    t0 = time.perf_counter()
    rows = {r.name: r for r in pipeline.validate_table(TABLE_DIR)}
    elapsed = time.perf_counter() - t0
    targets = {
        # name: (tabulated chi, chi tolerance, reference delta)
        "transmon": (24.8e6, 0.05e6, 5.5),
        "photon-blockade": (29.8e6, 0.05e6, 6.3),
        "enz-ito": (0.25, 0.005, 8.3),
    }
    parts, ok = [], elapsed < 1.0
    for name, (chi_t, chi_tol, ref) in targets.items():
        r = rows[name]
        good = _within(r.chi_tab_hz, chi_t, chi_tol) and _within(r.delta_pct, ref, pipeline.TABLE_DELTA_TOL)
        ok &= good
        parts.append(
            f"{name} chi={r.chi_tab_hz:.4g} Hz delta={r.delta_pct:.3f}% "
            f"(ref {ref}, exact-pred delta {r.delta_exact_pct:.3f}%) {'ok' if good else 'MISS'}"
        )
    criterion(2, "table regeneration", ok, "; ".join(parts) + f"; {elapsed * 1e3:.1f} ms")
    assert ok


def test_criterion_3_gaas_conversion(criterion):
    chi3 = photonic.chi3_from_n2(3.1e-18, 3.3)
    ok = 1.15e-19 <= chi3 <= 1.25e-19
    criterion(3, "GaAs n2 -> chi3", ok, f"chi3 = {chi3:.5e} (m/V)^2, window [1.15e-19, 1.25e-19]")
    assert ok


def test_criterion_4_oracle_equivalence(criterion):
    dev = parse_device_file(TABLE_DIR / "01_quarton.dev")
    t0 = time.perf_counter()
    reps = {}
    for lam in (1e-3, 1e-4):
        _, system = pipeline.oracle_system(dev, lam, dim=12)
        reps[lam] = fock.verify_rwa_reduction(system)
    elapsed = time.perf_counter() - t0
    d3, d4 = reps[1e-3].rel_dev, reps[1e-4].rel_dev
    ratio = d3 / d4
    ok = d3 < 0.01 and ratio >= 5 and elapsed < 30
    criterion(
        4, "oracle vs law", ok,
        f"rel_dev(1e-3)={d3:.3e} (<1e-2), rel_dev(1e-4)={d4:.3e}, ratio={ratio:.2f} (>=5), "
        f"start dim 12, converged dims {reps[1e-3].dim}/{reps[1e-4].dim}; {elapsed:.2f} s",
    )
    assert ok


def _charge_basis_anharmonicity(EJ, EC, ncut=40):
    # exact transmon at zero offset charge, used only for context in the report
    n = np.arange(-ncut, ncut + 1)
    H = np.diag(4 * EC * n**2.0) - 0.5 * EJ * (np.eye(n.size, k=1) + np.eye(n.size, k=-1))
    e = np.linalg.eigvalsh(H)
    return e[2] - 2 * e[1] + e[0]


def test_criterion_5_self_kerr(criterion):
    EJ, EC = 14.8e9, 0.21e9
    junction = sc.JunctionParams(EnergyScale(EJ), EnergyScale(EC))
    t0 = time.perf_counter()
    system = fock.self_kerr_system(
        sc.transmon_plasma_frequency(junction), sc.phi_zpf(junction), c=-1.0, e4=EJ
    )
    rep = fock.verify_self_kerr_reduction(system)
    elapsed = time.perf_counter() - t0
    ratio = abs(rep.chi_full) / EC
    ok = abs(ratio - 1.0) <= 0.05 and elapsed < 10
    exact = abs(_charge_basis_anharmonicity(EJ, EC)) / EC
    criterion(
        5, "self-Kerr E_C identity", ok,
        f"|K|/E_C = {ratio:.4f} (target 1 +- 0.05) from the quartic oracle at EJ/EC = {EJ / EC:.1f}, "
        f"lambda* = {rep.lambda_star:.3f}, dim {rep.dim}; analytic 1/2 c phi^4 E4 = {abs(rep.chi_analytic) / EC:.4f} E_C; "
        f"full cosine transmon gives {exact:.4f}; {elapsed:.2f} s",
    )
    assert ok


def test_criterion_6_snail_kerr_free(criterion):
    EJ = EnergyScale(6e9)
    t0 = time.perf_counter()
    fluxes = np.linspace(0.0, 0.5, 1001)
    c4 = np.array([sc.snail_c4(3, 0.29, EJ, f) for f in fluxes])
    sweep_time = time.perf_counter() - t0
    s = np.sign(c4)
    changes = int(np.count_nonzero(s[1:] != s[:-1]))
    root = sc.find_kerr_free_flux(3, 0.29, EJ)
    resid = abs(sc.snail_c4(3, 0.29, EJ, root)) / EJ.freq_equiv
    rep = pipeline.run_prediction(parse_device_file(TABLE_DIR / "02_snail.dev"))
    null = abs(rep.prediction.chi_over_2pi) / abs(rep.value("chi_flux0_hz"))
    ok = changes == 1 and resid < 1e-9 and null < 1e-6 and sweep_time < 5
    criterion(
        6, "SNAIL Kerr-free bias", ok,
        f"sign changes={changes}, flux*={root:.9f}, |c4|/EJ={resid:.2e} (<1e-9), "
        f"|chi|/|chi(0)|={null:.2e} (<1e-6), 1001-point sweep {sweep_time:.2f} s",
    )
    assert ok


def test_criterion_7_property_suites(criterion):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-m", "property", "-p", "no:cacheprovider",
         "--ignore", str(TESTS / "test_acceptance.py"), str(TESTS)],
        capture_output=True, text=True, cwd=TESTS.parent, check=False,
    )
    elapsed = time.perf_counter() - t0
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr
    passed = re.search(r"(\d+) passed", summary)
    ok = proc.returncode == 0 and passed is not None
    criterion(7, "property suites", ok, f"{summary.strip('= ')}; {elapsed:.1f} s")
    assert ok, proc.stdout[-4000:]
