"""Josephson-circuit projection kernels.

Phases use charge normalization, phi_zpf = (2 EC / EJ)^(1/4). The SNAIL
potential puts the external flux in the N-junction arm,

    V(phi)/h = -N EJ cos((phi - 2 pi flux) / N) - alpha EJ cos(phi),

and all Taylor coefficients about the minimum are analytic derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from kerrlaw.core import EnergyScale, ProjectionFactor
from kerrlaw.errors import DomainError, NoKerrFreePoint, NumericalError


@dataclass(frozen=True)
class JunctionParams:
    EJ: EnergyScale
    EC: EnergyScale

    def __post_init__(self):
        if self.EJ.freq_equiv <= 0 or self.EC.freq_equiv <= 0:
            raise DomainError("EJ and EC must both be > 0")


@dataclass(frozen=True)
class QuartonSpec:
    junction: JunctionParams
    p_A: float
    p_B: float
    omega_A: float
    omega_B: float

    def __post_init__(self):
        _check_participation(self.p_A, "p_A")
        _check_participation(self.p_B, "p_B")
        if self.omega_A <= 0 or self.omega_B <= 0:
            raise DomainError("mode frequencies must be > 0")
        if self.omega_A == self.omega_B:
            raise DomainError("quarton modes must be non-degenerate")


@dataclass(frozen=True)
class SnailSpec:
    N: int
    alpha: float
    EJ: EnergyScale
    flux: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"SNAIL needs N >= 2 series junctions, got {self.N!r}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha!r}")
        if self.EJ.freq_equiv <= 0:
            raise DomainError("SNAIL EJ must be > 0")


@dataclass(frozen=True)
class SnailExpansion:
    """Taylor data of V/h about its minimum.

    c2, c3, c4 multiply phi^2/2!, phi^3/3!, phi^4/4! and are in Hz.
    """

    phi_min: float
    c2: float
    c3: float
    c4: float


def _check_participation(p, name):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"participation ratio {name}={p!r} outside [0, 1]")


def phi_zpf(j: JunctionParams) -> float:
    return (2.0 * j.EC.freq_equiv / j.EJ.freq_equiv) ** 0.25


def eta_junction(p_A: float, p_B: float, phi: float, rel_unc: float = 0.0) -> ProjectionFactor:
    """Cross-Kerr projection through one junction with participations p_A, p_B."""
    _check_participation(p_A, "p_A")
    _check_participation(p_B, "p_B")
    if phi < 0:
        raise DomainError("phi_zpf must be >= 0")
    # written as (p_A phi)^2 (p_B phi)^2 so it is bit-identical to eta_quarton
    return ProjectionFactor((p_A * phi) ** 2 * (p_B * phi) ** 2, rel_unc, "junction")


def eta_quarton(phi_A: float, phi_B: float, rel_unc: float = 0.0) -> ProjectionFactor:
    if phi_A < 0 or phi_B < 0:
        raise DomainError("projected zero-point amplitudes must be >= 0")
    return ProjectionFactor(phi_A**2 * phi_B**2, rel_unc, "quarton")


def eta_squid(coupler: JunctionParams, rel_unc: float = 0.0) -> ProjectionFactor:
    return ProjectionFactor(
        coupler.EC.freq_equiv / (8.0 * coupler.EJ.freq_equiv), rel_unc, "squid"
    )


def eta_fluxonium(p: float, phi: float, rel_unc: float = 0.0) -> ProjectionFactor:
    _check_participation(p, "p")
    if phi < 0:
        raise DomainError("phi_zpf must be >= 0")
    return ProjectionFactor(p**2 * phi**4, rel_unc, "fluxonium")


def sc_eta_uncertainty(rel_EC: float, rel_EJ: float) -> float:
    """Relative uncertainty of a phi_zpf^4-based eta from those of EC and EJ."""
    if rel_EC < 0 or rel_EJ < 0:
        raise DomainError("relative uncertainties must be >= 0")
    return 0.5 * rel_EC + 0.5 * rel_EJ


# --- SNAIL ---------------------------------------------------------------


def snail_potential(phi, spec: SnailSpec):
    """V(phi)/h in Hz. Accepts scalars or arrays."""
    ej = spec.EJ.freq_equiv
    u = (np.asarray(phi) - 2.0 * np.pi * spec.flux) / spec.N
    v = -spec.N * ej * np.cos(u) - spec.alpha * ej * np.cos(phi)
    return float(v) if np.ndim(v) == 0 else v


def _derivatives(phi, spec: SnailSpec):
    """Analytic V', V'', V''', V'''' (Hz) at phi."""
    ej, n, a = spec.EJ.freq_equiv, spec.N, spec.alpha
    u = (phi - 2.0 * np.pi * spec.flux) / n
    d1 = ej * np.sin(u) + a * ej * np.sin(phi)
    d2 = ej / n * np.cos(u) + a * ej * np.cos(phi)
    d3 = -ej / n**2 * np.sin(u) - a * ej * np.sin(phi)
    d4 = -ej / n**3 * np.cos(u) - a * ej * np.cos(phi)
    return d1, d2, d3, d4


_SEEDS = 8
_GRID_PER_SEED = 64


def _snail_minimum(spec: SnailSpec) -> float:
    n = spec.N
    lo, hi = -np.pi * n, np.pi * n
    # 8 seed segments, each scanned for V' sign changes (- to +) and refined.
    grid = np.linspace(lo, hi, _SEEDS * _GRID_PER_SEED + 1)
    d1 = _derivatives(grid, spec)[0]
    candidates = []
    for i in range(len(grid) - 1):
        a, b = d1[i], d1[i + 1]
        if a == 0.0 and _derivatives(grid[i], spec)[1] > 0:
            candidates.append(grid[i])
        elif a < 0 < b:
            root = optimize.brentq(
                lambda x: _derivatives(x, spec)[0], grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15
            )
            candidates.append(root)
    if not candidates:
        raise NumericalError(
            f"no bracketed minimum of the SNAIL potential on [{lo:.3f}, {hi:.3f}] "
            f"(N={spec.N}, alpha={spec.alpha}, flux={spec.flux})"
        )
    values = [snail_potential(x, spec) for x in candidates]
    best = candidates[int(np.argmin(values))]
    residual = abs(_derivatives(best, spec)[0])
    if residual >= 1e-10 * spec.EJ.freq_equiv:
        raise NumericalError(
            f"SNAIL minimum not converged: |V'|={residual:.3e} Hz at phi={best:.6f}"
        )
    return float(best)


def snail_expansion(spec: SnailSpec) -> SnailExpansion:
    phi_min = _snail_minimum(spec)
    _, c2, c3, c4 = _derivatives(phi_min, spec)
    return SnailExpansion(phi_min=phi_min, c2=float(c2), c3=float(c3), c4=float(c4))


def snail_c4(N: int, alpha: float, EJ: EnergyScale, flux: float) -> float:
    return snail_expansion(SnailSpec(N, alpha, EJ, flux)).c4


def find_kerr_free_flux(
    N: int, alpha: float, EJ: EnergyScale, lo: float = 0.0, hi: float = 0.5, edge: float = 1e-6
) -> float:
    """Flux (in flux quanta) where the quartic coefficient c4 vanishes.

    The interval is probed just inside its ends, ``lo + edge`` and
    ``hi - edge``, and bisected to |c4| < 1e-9 EJ.
    """
    a, b = lo + edge, hi - edge
    fa, fb = snail_c4(N, alpha, EJ, a), snail_c4(N, alpha, EJ, b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise NoKerrFreePoint(
            f"c4 keeps sign {'+' if fa > 0 else '-'} on ({lo}, {hi}) for N={N}, alpha={alpha}; "
            "alpha is outside the Kerr-cancellation range"
        )
    root = optimize.bisect(
        lambda f: snail_c4(N, alpha, EJ, f), a, b, xtol=1e-15, rtol=1e-15, maxiter=200
    )
    resid = abs(snail_c4(N, alpha, EJ, root))
    if resid >= 1e-9 * EJ.freq_equiv:
        raise NumericalError(f"bisection stalled: |c4|={resid:.3e} Hz at flux={root:.12f}")
    return float(root)


def snail_phi_zpf(EC: EnergyScale, expansion: SnailExpansion) -> float:
    """Charge-normalized ZPF using the curvature c2 as the effective EJ."""
    if expansion.c2 <= 0:
        raise DomainError("SNAIL curvature c2 must be > 0 at a minimum")
    return (2.0 * EC.freq_equiv / expansion.c2) ** 0.25


def transmon_plasma_frequency(j: JunctionParams) -> float:
    """sqrt(8 EJ EC), the harmonic frequency of a junction mode (Hz)."""
    return math.sqrt(8.0 * j.EJ.freq_equiv * j.EC.freq_equiv)
