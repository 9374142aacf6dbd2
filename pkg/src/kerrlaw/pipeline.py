"""Prediction chains per platform, table regeneration, sweeps and oracle checks.

Every number in a report is an ``Entry`` tagged measured, paper-kernel,
assumed (echoed inputs) or computed (derived here from the echoed inputs).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from kerrlaw import fock
from kerrlaw.core import (
    EnergyScale,
    KerrPrediction,
    ProjectionFactor,
    Regime,
    RegimeInputs,
    classify_regime,
    percent_deviation,
    predict_cross_kerr,
    predict_self_kerr,
)
from kerrlaw.devices import SCHEMAS, DeviceFile, DeviceFileError, parse_device_file
from kerrlaw.errors import KerrError, StrongMixing, UnsupportedPlatform
from kerrlaw.kernels import enz, photonic, sc

log = logging.getLogger(__name__)

TABLE_DELTA_TOL = 0.15  # absolute percentage points
TABLE_SIG_FIGS = 3
SNAIL_NULL_RATIO = 1e-6
ORACLE_THRESHOLD = 0.01


@dataclass(frozen=True)
class Entry:
    name: str
    value: object
    unit: str
    provenance: str


@dataclass
class PredictionReport:
    platform: str
    name: str
    inputs: List[Entry] = field(default_factory=list)
    intermediates: List[Entry] = field(default_factory=list)
    prediction: Optional[KerrPrediction] = None
    measured: Optional[tuple] = None
    kind: str = "cross-kerr"

    def value(self, name):
        for e in self.inputs + self.intermediates:
            if e.name == name:
                return e.value
        raise KeyError(name)

    def columns(self) -> Dict[str, object]:
        """Numeric summary with a column set fixed per platform."""
        out = {}
        for col in REPORT_COLUMNS[self.platform]:
            try:
                out[col] = self.value(col)
            except KeyError:
                out[col] = None
        p = self.prediction
        out["chi_hz"] = p.chi_over_2pi
        out["chi_unc_hz"] = p.abs_unc
        out["chi_meas_hz"] = self.measured[0] if self.measured else None
        out["delta_pct"] = p.deviation_pct
        out["regime"] = p.regime.value
        return out


# per-platform numeric columns, in output order; missing values print empty
REPORT_COLUMNS = {
    "quarton": ["EJ", "EC", "p_A", "p_B", "omega_A", "omega_B", "e4_hz", "phi_zpf",
                "phi_A", "phi_B", "eta_analytic", "eta_used", "eta_rel_unc"],
    "squid": ["EJ", "EC", "e4_hz", "phi_zpf", "eta_analytic", "eta_used", "eta_rel_unc"],
    "fluxonium": ["EJ", "p", "phi_zpf", "e4_hz", "eta_analytic", "eta_used", "eta_rel_unc"],
    "snail": ["EJ", "EC", "N", "alpha", "flux", "phi_min", "c2_hz", "c3_hz", "c4_hz",
              "phi_zpf", "c_aaaa", "e4_hz", "eta_analytic", "eta_used", "chi_flux0_hz"],
    "photonic": ["wavelength", "n0", "chi3", "V_eff", "overlap", "Gamma0", "omega_rad_s",
                 "e4_analytic_hz", "e4_hz", "eta_analytic", "eta_used"],
    "enz": ["eps_inf", "omega_p", "gamma", "omega_probe", "omega_enz", "eps_abs",
            "e4_analytic_hz", "e4_hz", "eta_used"],
}


class _Builder:
    def __init__(self, dev: DeviceFile):
        self.dev = dev
        self.report = PredictionReport(dev.platform, dev.name)
        for key, p in dev.params.items():
            if key in ("name", "measured_chi"):
                continue
            self.report.inputs.append(Entry(key, p.value, p.unit, p.provenance))

    def computed(self, name, value, unit=""):
        log.info("%s: %s = %r %s", self.dev.name, name, value, unit)
        self.report.intermediates.append(Entry(name, value, unit, "computed"))
        return value

    def energy(self, key) -> EnergyScale:
        return EnergyScale(float(self.dev.get(key)), self.dev.rel(key))

    def eta_override(self, analytic: Optional[ProjectionFactor]) -> ProjectionFactor:
        """Projection factor actually used: the stored kernel value when given."""
        dev = self.dev
        if "eta_kernel" in dev:
            p = dev.param("eta_kernel")
            rel = p.rel_unc if p.rel_unc > 0 else (analytic.rel_unc if analytic else 0.0)
            eta = ProjectionFactor(float(p.value), rel, p.provenance)
            self.report.intermediates.append(Entry("eta_used", eta.value, "", p.provenance))
        else:
            eta = analytic
            self.computed("eta_used", eta.value)
        self.computed("eta_rel_unc", eta.rel_unc)
        return eta


def _finish(b: _Builder, pred: KerrPrediction, omega: Optional[float], kappa=None, spacing=None):
    dev = b.dev
    kappa = dev.get("kappa", kappa)
    spacing = dev.get("mode_spacing", spacing)
    regime = Regime.UNKNOWN
    if omega is not None and omega > 0:
        regime = classify_regime(RegimeInputs(pred.chi_over_2pi, omega, kappa, spacing))
    dev_pct = None
    if dev.measured_chi is not None:
        b.report.measured = dev.measured_chi
        dev_pct = percent_deviation(pred.chi_over_2pi, dev.measured_chi[0])
    b.report.prediction = KerrPrediction(pred.chi_over_2pi, pred.abs_unc, regime, dev_pct)
    return b.report


def _quarton(b: _Builder):
    dev = b.dev
    EJ, EC = b.energy("EJ"), b.energy("EC")
    junction = sc.JunctionParams(EJ, EC)
    spec = sc.QuartonSpec(junction, dev.get("p_A"), dev.get("p_B"), dev.get("omega_A"), dev.get("omega_B"))
    e4 = EJ  # quarton junction energy is the quartic scale
    b.computed("e4_hz", e4.freq_equiv, "Hz")
    phi = b.computed("phi_zpf", sc.phi_zpf(junction))
    b.computed("phi_A", spec.p_A * phi)
    b.computed("phi_B", spec.p_B * phi)
    rel = sc.sc_eta_uncertainty(EC.rel_unc, EJ.rel_unc)
    analytic = sc.eta_junction(spec.p_A, spec.p_B, phi, rel)
    b.computed("eta_analytic", analytic.value)
    eta = b.eta_override(analytic)
    pred = predict_cross_kerr(eta, e4)
    omega = min(spec.omega_A, spec.omega_B)
    return _finish(b, pred, omega, spacing=abs(spec.omega_A - spec.omega_B))


def _squid(b: _Builder):
    dev = b.dev
    EJ, EC = b.energy("EJ"), b.energy("EC")
    junction = sc.JunctionParams(EJ, EC)
    b.computed("e4_hz", EJ.freq_equiv, "Hz")
    b.computed("phi_zpf", sc.phi_zpf(junction))
    # eta is linear in EC/EJ, so the relative errors add directly
    analytic = sc.eta_squid(junction, EC.rel_unc + EJ.rel_unc)
    b.computed("eta_analytic", analytic.value)
    eta = b.eta_override(analytic)
    pred = predict_cross_kerr(eta, EJ)
    omega = dev.get("omega")
    if omega is None:
        omega = b.computed("omega_plasma_hz", sc.transmon_plasma_frequency(junction), "Hz")
    return _finish(b, pred, omega)


def _fluxonium(b: _Builder):
    dev = b.dev
    EJ = b.energy("EJ")
    b.computed("e4_hz", EJ.freq_equiv, "Hz")
    p, phi = dev.get("p"), dev.get("phi_zpf")
    rel = 2 * dev.rel("p") + 4 * dev.rel("phi_zpf")
    analytic = sc.eta_fluxonium(p, phi, rel)
    b.computed("eta_analytic", analytic.value)
    eta = b.eta_override(analytic)
    pred = predict_cross_kerr(eta, EJ)
    return _finish(b, pred, dev.get("omega"))


def snail_self_kerr(EJ: EnergyScale, EC: EnergyScale, N: int, alpha: float, flux: float):
    """(expansion, phi_zpf, c_aaaa, prediction) for a SNAIL at a given flux."""
    expansion = sc.snail_expansion(sc.SnailSpec(N, alpha, EJ, flux))
    phi = sc.snail_phi_zpf(EC, expansion)
    c = expansion.c4 / EJ.freq_equiv
    return expansion, phi, c, predict_self_kerr(c, phi, EJ)


def _snail(b: _Builder):
    dev = b.dev
    EJ, EC = b.energy("EJ"), b.energy("EC")
    N, alpha = dev.get("N"), dev.get("alpha")
    flux = dev.get("flux")
    if flux == "kerr-free":
        flux = b.computed("flux_kerr_free", sc.find_kerr_free_flux(N, alpha, EJ), "Phi0")
    else:
        flux = float(flux)
    expansion, phi, c, pred = snail_self_kerr(EJ, EC, N, alpha, flux)
    b.computed("phi_min", expansion.phi_min, "rad")
    b.computed("c2_hz", expansion.c2, "Hz")
    b.computed("c3_hz", expansion.c3, "Hz")
    b.computed("c4_hz", expansion.c4, "Hz")
    b.computed("phi_zpf", phi)
    b.computed("c_aaaa", c)
    b.computed("e4_hz", EJ.freq_equiv, "Hz")
    eta = b.computed("eta_analytic", 0.5 * abs(c) * phi**4)
    b.computed("eta_used", eta)
    ref = snail_self_kerr(EJ, EC, N, alpha, 0.0)[3]
    b.computed("chi_flux0_hz", ref.chi_over_2pi, "Hz")
    omega = dev.get("omega")
    if omega is None:
        omega = b.computed("omega_plasma_hz", math.sqrt(8.0 * expansion.c2 * EC.freq_equiv), "Hz")
    return _finish(b, pred, omega)


def _resolve(dev: DeviceFile, key) -> Path:
    p = Path(str(dev.get(key)))
    if not p.is_absolute() and dev.path is not None:
        p = dev.path.parent / p
    return p


def _photonic(b: _Builder):
    dev = b.dev
    if "chi3" in dev:
        chi3 = float(dev.get("chi3"))
        rel_chi3 = dev.rel("chi3")
    else:
        chi3 = b.computed("chi3", photonic.chi3_from_n2(float(dev.get("n2")), dev.get("n0")), "m^2/V^2")
        rel_chi3 = dev.rel("n2")

    grid_a = grid_b = None
    if "field_a" in dev:
        grid_a = photonic.normalize_grid(photonic.read_field_grid(_resolve(dev, "field_a")))
        grid_b = photonic.normalize_grid(photonic.read_field_grid(_resolve(dev, "field_b")))
    if "V_eff" in dev:
        V_eff = float(dev.get("V_eff"))
    else:
        V_eff = b.computed("V_eff", photonic.mode_volume(grid_a), "m^3")
    if "overlap" in dev:
        overlap = float(dev.get("overlap"))
    else:
        overlap = b.computed("overlap", photonic.overlap_integral(grid_a, grid_b), "m^-3")

    spec = photonic.PhotonicSpec(dev.get("wavelength"), dev.get("n0"), chi3, V_eff, dev.get("Gamma0"))
    if "Gamma0" not in dev:
        b.computed("Gamma0", spec.reference_overlap, "m^-3")
    b.computed("omega_rad_s", spec.omega, "rad/s")
    rel_v = dev.rel("V_eff")
    e4_analytic = photonic.e4_photonic(spec, rel_unc=rel_chi3 + rel_v)
    b.computed("e4_analytic_hz", e4_analytic.freq_equiv, "Hz")
    e4 = _e4_override(b, e4_analytic)
    analytic = photonic.eta_photonic(spec, overlap, rel_v + dev.rel("overlap"))
    b.computed("eta_analytic", analytic.value)
    eta = b.eta_override(analytic)
    pred = predict_cross_kerr(eta, e4)
    omega = dev.get("omega", spec.omega / (2 * math.pi))
    return _finish(b, pred, omega)


def _e4_override(b: _Builder, analytic: Optional[EnergyScale]) -> EnergyScale:
    dev = b.dev
    if "e4_kernel" in dev:
        p = dev.param("e4_kernel")
        e4 = EnergyScale(float(p.value), p.rel_unc)
        b.report.intermediates.append(Entry("e4_hz", e4.freq_equiv, "Hz", p.provenance))
        return e4
    b.computed("e4_hz", analytic.freq_equiv, "Hz")
    return analytic


def _enz(b: _Builder):
    dev = b.dev
    analytic = None
    omega = None
    if "omega_p" in dev:
        drude = enz.DrudeParams(dev.get("omega_p"), dev.get("gamma", 0.0), dev.get("eps_inf", 1.0))
        try:
            b.computed("omega_enz", enz.find_enz_frequency(drude), "rad/s")
        except enz.NoEnzPoint:
            log.warning("%s: no ENZ crossing for these Drude parameters", dev.name)
        w = float(dev.get("omega_probe"))
        omega = w / (2 * math.pi)
        b.computed("eps_abs", abs(enz.drude_permittivity(drude, w)))
        spec = enz.EnzSpec(drude, dev.get("chi3_eff"), dev.get("V_eff"))
        analytic = enz.e4_enz(spec, w, dev.rel("chi3_eff") + dev.rel("V_eff"))
        b.computed("e4_analytic_hz", analytic.freq_equiv, "Hz")
    elif "e4_kernel" not in dev:
        raise DeviceFileError("enz device needs either Drude parameters or e4_kernel", dev.path)
    e4 = _e4_override(b, analytic)
    eta = b.eta_override(None)
    pred = predict_cross_kerr(eta, e4)
    return _finish(b, pred, omega)


_CHAINS = {
    "quarton": _quarton,
    "squid": _squid,
    "fluxonium": _fluxonium,
    "snail": _snail,
    "photonic": _photonic,
    "enz": _enz,
}


def run_prediction(dev: DeviceFile) -> PredictionReport:
    b = _Builder(dev)
    if dev.platform == "snail":
        b.report.kind = "self-kerr"
    try:
        return _CHAINS[dev.platform](b)
    except KerrError as exc:
        if getattr(exc, "context", None) is None:
            exc.context = str(dev.path) if dev.path is not None else dev.name
        raise


# --- Table regeneration -------------------------------------------------------


def round_sig(x: float, digits: int = TABLE_SIG_FIGS) -> float:
    """Round half-up to significant figures, working on the shortest repr of x."""
    if x == 0 or not math.isfinite(x):
        return x
    d = Decimal(repr(x))
    exp = d.adjusted() - digits + 1
    return float(d.quantize(Decimal(1).scaleb(exp), rounding=ROUND_HALF_UP))


@dataclass
class TableRow:
    name: str
    platform: str
    e4_hz: float
    eta: float
    chi_pred_hz: float
    chi_tab_hz: float
    chi_meas_hz: Optional[float]
    delta_pct: Optional[float]
    delta_exact_pct: Optional[float]
    reference_delta: Optional[float]
    status: str
    note: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "platform": self.platform,
            "e4_hz": self.e4_hz,
            "eta": self.eta,
            "chi_pred_hz": self.chi_pred_hz,
            "chi_tab_hz": self.chi_tab_hz,
            "chi_meas_hz": self.chi_meas_hz,
            "delta_pct": self.delta_pct,
            "delta_exact_pct": self.delta_exact_pct,
            "reference_delta_pct": self.reference_delta,
            "status": self.status,
            "note": self.note,
        }


TABLE_COLUMNS = [
    "name", "platform", "e4_hz", "eta", "chi_pred_hz", "chi_tab_hz", "chi_meas_hz",
    "delta_pct", "delta_exact_pct", "reference_delta_pct", "status", "note",
]


def table_row(dev: DeviceFile) -> TableRow:
    rep = run_prediction(dev)
    chi = rep.prediction.chi_over_2pi
    e4 = rep.value("e4_hz")
    eta = rep.value("eta_used")
    meas = rep.measured[0] if rep.measured else None
    ref = dev.get("reference_delta")

    if dev.platform == "snail":
        off = rep.value("chi_flux0_hz")
        ok = abs(chi) < SNAIL_NULL_RATIO * abs(off)
        return TableRow(
            rep.name, dev.platform, e4, eta, chi, chi, meas, None, None, None,
            "pass" if ok else "fail",
            f"~0 at bias: |chi|/|chi(flux=0)| = {abs(chi) / abs(off):.2e}",
        )

    tab = round_sig(chi)
    delta = exact = None
    status = "n/a"
    if meas is not None:
        # deviation from the tabulated (3 s.f.) prediction, as the printed table does
        delta = percent_deviation(tab, meas)
        exact = percent_deviation(chi, meas)
        if ref is not None:
            status = "pass" if abs(delta - ref) <= TABLE_DELTA_TOL else "fail"
    return TableRow(rep.name, dev.platform, e4, eta, chi, tab, meas, delta, exact, ref, status)


def validate_table(device_dir) -> List[TableRow]:
    device_dir = Path(device_dir)
    if not device_dir.is_dir():
        raise DeviceFileError("not a directory", device_dir)
    files = sorted(device_dir.glob("*.dev"))
    if not files:
        raise DeviceFileError("no *.dev device files found", device_dir)
    devices = [parse_device_file(f) for f in files]
    return [table_row(dev) for dev in devices]


# --- Sweeps -------------------------------------------------------------------


def sweepable_keys(platform: str) -> List[str]:
    return [k for k, spec in SCHEMAS[platform].items() if spec.sweepable]


def sweep(dev: DeviceFile, param: str, lo: float, hi: float, points: int):
    """Re-run the prediction over ``points`` values of ``param``; returns (header, rows)."""
    keys = sweepable_keys(dev.platform)
    if param not in keys:
        raise DeviceFileError(
            f"{param!r} is not sweepable for platform {dev.platform!r}; "
            f"sweepable keys: {', '.join(keys)}",
            dev.path,
        )
    if points < 1:
        raise DeviceFileError("--points must be >= 1", dev.path)
    values = [lo] if lo == hi else list(np.linspace(lo, hi, points))
    header = None
    rows = []
    for v in values:
        rep = run_prediction(dev.with_value(param, float(v)))
        cols = {param: float(v), **{k: c for k, c in rep.columns().items() if k != param}}
        if header is None:
            header = list(cols)
        rows.append([cols[h] for h in header])
    return header, rows


# --- Oracle check -------------------------------------------------------------


@dataclass(frozen=True)
class OracleCheck:
    name: str
    platform: str
    mode: str
    lambda_star: float
    report: Optional[fock.OracleReport]
    passed: bool
    message: str = ""


def oracle_system(dev: DeviceFile, lambda_star: float, dim: int = fock.DEFAULT_DIM):
    """FockSystem for a device, scaled so its perturbation parameter is ``lambda_star``."""
    if dev.platform == "quarton":
        junction = sc.JunctionParams(EnergyScale(dev.get("EJ")), EnergyScale(dev.get("EC")))
        phi = sc.phi_zpf(junction)
        return "cross", fock.cross_kerr_system(
            dev.get("omega_A"), dev.get("omega_B"), dev.get("p_A") * phi, dev.get("p_B") * phi,
            lambda_star, dim=dim,
        )
    if dev.platform == "squid":
        junction = sc.JunctionParams(EnergyScale(dev.get("EJ")), EnergyScale(dev.get("EC")))
        omega = dev.get("omega") or sc.transmon_plasma_frequency(junction)
        return "self", fock.self_kerr_system(omega, sc.phi_zpf(junction), lambda_star, dim=dim)
    if dev.platform == "fluxonium":
        if "omega" not in dev:
            raise DeviceFileError("oracle-check on fluxonium needs key 'omega'", dev.path)
        # sqrt(p) * phi reproduces eta = p^2 phi^4 as a single-mode amplitude
        phi = math.sqrt(dev.get("p")) * dev.get("phi_zpf")
        return "self", fock.self_kerr_system(dev.get("omega"), phi, lambda_star, dim=dim)
    raise UnsupportedPlatform(
        f"oracle-check is not defined for platform {dev.platform!r}: "
        "only quarton, squid and fluxonium reduce to a one- or two-mode quartic system"
    )


def oracle_check(dev: DeviceFile, lambda_star: float, dim: int = fock.DEFAULT_DIM,
                 threshold: float = ORACLE_THRESHOLD) -> OracleCheck:
    if lambda_star < 0:
        raise DeviceFileError("--lambda must be >= 0", dev.path)
    mode, system = oracle_system(dev, lambda_star, dim)
    verify = fock.verify_rwa_reduction if mode == "cross" else fock.verify_self_kerr_reduction
    try:
        rep = verify(system)
    except StrongMixing as exc:
        return OracleCheck(dev.name, dev.platform, mode, lambda_star, None, False, str(exc))
    passed = rep.rel_dev < threshold
    msg = f"rel_dev {rep.rel_dev:.3e} {'<' if passed else '>='} {threshold:g}"
    return OracleCheck(dev.name, dev.platform, mode, lambda_star, rep, passed, msg)
