"""Truncated Fock-space diagonalization oracle.

Builds H/h = sum_mu omega_mu n_mu + sum_terms E4 * c / prod(k_mu!) * prod_mu [phi_mu (a_mu + a_mu^dag)]^k_mu
in a product number basis, diagonalizes it densely, and reads Kerr rates
off energy double differences. Nothing here uses the analytic law except
``verify_*``, which compares against it.

With the 1/prod(k!) prefactor a (2, 2) term carries E4 c / 4 and a (4,)
term E4 c / 24, i.e. both are monomial coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from kerrlaw.core import EnergyScale
from kerrlaw.errors import DomainError, NumericalError, StrongMixing

MAX_TOTAL_DIM = 10_000
DEFAULT_DIM = 12
CONVERGENCE_RTOL = 1e-9
# per-mode ceiling for automatic truncation growth; potentials unbounded
# below (a bare negative quartic) never converge and must stop somewhere
MAX_AUTO_DIM = 40


@dataclass(frozen=True)
class Mode:
    omega: float  # Hz
    phi_zpf: float


@dataclass(frozen=True)
class MonomialTerm:
    exponents: Tuple[int, ...]
    c: float
    e4: EnergyScale

    @property
    def prefactor(self) -> float:
        return 1.0 / math.prod(math.factorial(k) for k in self.exponents)


@dataclass(frozen=True)
class FockSystem:
    modes: Tuple[Mode, ...]
    terms: Tuple[MonomialTerm, ...] = ()
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.modes:
            raise DomainError("a Fock system needs at least one mode")
        freqs = [m.omega for m in self.modes]
        if any(w <= 0 for w in freqs):
            raise DomainError("mode frequencies must be > 0")
        if len(set(freqs)) != len(freqs):
            raise DomainError("mode frequencies must be pairwise distinct")
        if any(m.phi_zpf < 0 for m in self.modes):
            raise DomainError("phi_zpf must be >= 0")
        if self.dim < 2:
            raise DomainError("per-mode truncation must be >= 2")
        for t in self.terms:
            if len(t.exponents) != len(self.modes):
                raise DomainError(
                    f"term exponents {t.exponents} do not match {len(self.modes)} modes"
                )
            if any(k < 0 for k in t.exponents) or sum(t.exponents) == 0:
                raise DomainError(f"invalid monomial exponents {t.exponents}")

    @property
    def total_dim(self) -> int:
        return self.dim ** len(self.modes)

    def with_dim(self, dim: int) -> "FockSystem":
        return FockSystem(self.modes, self.terms, dim)

    def with_omegas(self, omegas: Sequence[float]) -> "FockSystem":
        modes = tuple(Mode(w, m.phi_zpf) for w, m in zip(omegas, self.modes))
        return FockSystem(modes, self.terms, self.dim)

    def perturbation_parameter(self) -> float:
        """lambda* = max over terms of |c| E4 prod(phi^k) / min(omega)."""
        w_min = min(m.omega for m in self.modes)
        lam = 0.0
        for t in self.terms:
            amp = math.prod(m.phi_zpf**k for m, k in zip(self.modes, t.exponents))
            lam = max(lam, abs(t.c) * t.e4.freq_equiv * amp / w_min)
        return lam


@dataclass
class LabeledSpectrum:
    energies: Dict[Tuple[int, ...], float] = field(default_factory=dict)
    fidelities: Dict[Tuple[int, ...], float] = field(default_factory=dict)
    dim: int = 0


def _position(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    return a + a.T


def _embed(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def build_hamiltonian(sys: FockSystem) -> np.ndarray:
    if sys.total_dim > MAX_TOTAL_DIM:
        raise DomainError(
            f"Hilbert space of dimension {sys.total_dim} exceeds the {MAX_TOTAL_DIM} guard"
        )
    d = sys.dim
    ident = np.eye(d)
    number = np.diag(np.arange(d, dtype=float))
    x = _position(d)
    nmodes = len(sys.modes)

    H = np.zeros((sys.total_dim, sys.total_dim))
    for mu, mode in enumerate(sys.modes):
        ops = [ident] * nmodes
        ops[mu] = mode.omega * number
        H += _embed(ops)

    for term in sys.terms:
        strength = term.e4.freq_equiv * term.c * term.prefactor
        if strength == 0.0:
            continue
        ops = [
            np.linalg.matrix_power(mode.phi_zpf * x, k) if k else ident
            for mode, k in zip(sys.modes, term.exponents)
        ]
        H += strength * _embed(ops)

    return 0.5 * (H + H.T)


def _labels(nmodes: int, top: int):
    return itertools.product(range(top + 1), repeat=nmodes)


def diagonalize_and_label(sys: FockSystem, max_excitation: int = 2) -> LabeledSpectrum:
    """Eigendecompose H and tag eigenvalues with the bare Fock label they overlap most.

    Labels with every occupation <= ``max_excitation`` are kept; the
    truncation must leave at least three spare levels above them.
    """
    if sys.dim < max_excitation + 4:
        raise DomainError(
            f"dim={sys.dim} too small to label occupations up to {max_excitation} "
            f"(needs dim >= {max_excitation + 4})"
        )
    H = build_hamiltonian(sys)
    evals, evecs = np.linalg.eigh(H)
    if not np.all(np.isfinite(evals)):
        raise NumericalError("eigensolver returned non-finite energies")

    nmodes = len(sys.modes)
    spectrum = LabeledSpectrum(dim=sys.dim)
    strides = [sys.dim ** (nmodes - 1 - mu) for mu in range(nmodes)]
    for label in _labels(nmodes, max_excitation):
        row = sum(n * s for n, s in zip(label, strides))
        weights = evecs[row, :] ** 2
        j = int(np.argmax(weights))  # first maximum = lowest eigenvalue index
        fid = float(weights[j])
        if fid <= 0.5:
            raise StrongMixing(label, fid)
        spectrum.energies[label] = float(evals[j])
        spectrum.fidelities[label] = fid
    return spectrum


def _energy(spec: LabeledSpectrum, label):
    try:
        return spec.energies[label]
    except KeyError:
        raise DomainError(f"spectrum has no state labeled {label}") from None


def extract_cross_kerr(spec: LabeledSpectrum, modes: Tuple[int, int] = (0, 1)) -> float:
    """E(1,1) - E(1,0) - E(0,1) + E(0,0) for the chosen pair of modes, in Hz."""
    nmodes = len(next(iter(spec.energies)))
    if nmodes < 2:
        raise DomainError("cross-Kerr needs a spectrum with at least two modes")

    def lab(na, nb):
        out = [0] * nmodes
        out[modes[0]], out[modes[1]] = na, nb
        return tuple(out)

    return (
        _energy(spec, lab(1, 1))
        - _energy(spec, lab(1, 0))
        - _energy(spec, lab(0, 1))
        + _energy(spec, lab(0, 0))
    )


def extract_self_kerr(spec: LabeledSpectrum, mode: int = 0) -> float:
    """E(2) - 2 E(1) + E(0) for one mode, i.e. K/2pi in the K/2 n(n-1) convention."""
    nmodes = len(next(iter(spec.energies)))

    def lab(n):
        out = [0] * nmodes
        out[mode] = n
        return tuple(out)

    return _energy(spec, lab(2)) - 2.0 * _energy(spec, lab(1)) + _energy(spec, lab(0))


# --- converged extraction and the analytic comparison ------------------------


@dataclass(frozen=True)
class OracleReport:
    chi_full: float
    chi_analytic: float
    rel_dev: float
    lambda_star: float
    dim: int
    converged: bool


def _converged(sys: FockSystem, extract, rtol=CONVERGENCE_RTOL, step=2, max_dim=MAX_AUTO_DIM):
    """Extract at sys.dim, then raise dim until two successive values agree.

    Returns (value, dim, converged); gives up at ``max_dim`` per mode or the
    total-dimension guard, whichever comes first.
    """
    dim = sys.dim
    prev = extract(diagonalize_and_label(sys.with_dim(dim)))
    while True:
        nxt = dim + step
        if nxt > max_dim or nxt ** len(sys.modes) > MAX_TOTAL_DIM:
            return prev, dim, False
        cur = extract(diagonalize_and_label(sys.with_dim(nxt)))
        # agreement below eigensolver round-off counts as converged
        floor = 100 * np.finfo(float).eps * _spectral_scale(sys.with_dim(nxt))
        if abs(cur - prev) <= max(rtol * max(abs(cur), abs(prev)), floor):
            return cur, nxt, True
        prev, dim = cur, nxt


def _spectral_scale(sys: FockSystem) -> float:
    return sum(m.omega for m in sys.modes) * sys.dim


def _relative(full, analytic):
    if analytic == 0.0:
        return 0.0 if full == 0.0 else math.inf
    return abs(full - analytic) / abs(analytic)


def verify_rwa_reduction(sys: FockSystem, auto_dim: bool = True) -> OracleReport:
    """Compare the diagonalized cross-Kerr with c * phi_A^2 phi_B^2 * E4."""
    if len(sys.modes) != 2 or len(sys.terms) != 1 or sys.terms[0].exponents != (2, 2):
        raise DomainError("RWA check needs two modes and a single (2, 2) monomial")
    term = sys.terms[0]
    a, b = sys.modes
    analytic = term.c * a.phi_zpf**2 * b.phi_zpf**2 * term.e4.freq_equiv
    if auto_dim:
        full, dim, ok = _converged(sys, extract_cross_kerr)
    else:
        full, dim, ok = extract_cross_kerr(diagonalize_and_label(sys)), sys.dim, False
    return OracleReport(full, analytic, _relative(full, analytic), sys.perturbation_parameter(), dim, ok)


def verify_self_kerr_reduction(sys: FockSystem, auto_dim: bool = True) -> OracleReport:
    """Compare the diagonalized self-Kerr with 1/2 * c * phi^4 * E4."""
    if len(sys.modes) != 1 or len(sys.terms) != 1 or sys.terms[0].exponents != (4,):
        raise DomainError("self-Kerr check needs one mode and a single (4,) monomial")
    term = sys.terms[0]
    analytic = 0.5 * term.c * sys.modes[0].phi_zpf**4 * term.e4.freq_equiv
    if auto_dim:
        full, dim, ok = _converged(sys, extract_self_kerr)
    else:
        full, dim, ok = extract_self_kerr(diagonalize_and_label(sys)), sys.dim, False
    return OracleReport(full, analytic, _relative(full, analytic), sys.perturbation_parameter(), dim, ok)


def cross_kerr_system(
    omega_A: float,
    omega_B: float,
    phi_A: float,
    phi_B: float,
    lambda_star: float,
    c: float = 1.0,
    dim: int = DEFAULT_DIM,
) -> FockSystem:
    """Two-mode (2, 2) system whose E4 is set so the perturbation parameter is ``lambda_star``."""
    amp = phi_A**2 * phi_B**2
    if amp == 0 or c == 0:
        e4 = 0.0
    else:
        e4 = lambda_star * min(omega_A, omega_B) / (abs(c) * amp)
    modes = (Mode(omega_A, phi_A), Mode(omega_B, phi_B))
    return FockSystem(modes, (MonomialTerm((2, 2), c, EnergyScale(e4)),), dim)


def self_kerr_system(
    omega: float, phi: float, lambda_star: Optional[float] = None, c: float = 1.0,
    e4: Optional[float] = None, dim: int = DEFAULT_DIM,
) -> FockSystem:
    """Single-mode (4,) system; give either ``lambda_star`` or an explicit ``e4`` (Hz)."""
    if (lambda_star is None) == (e4 is None):
        raise DomainError("give exactly one of lambda_star or e4")
    if e4 is None:
        e4 = 0.0 if (phi == 0 or c == 0) else lambda_star * omega / (abs(c) * phi**4)
    return FockSystem((Mode(omega, phi),), (MonomialTerm((4,), c, EnergyScale(e4)),), dim)
