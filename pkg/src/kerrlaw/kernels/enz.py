"""Epsilon-near-zero kernel built on a Drude permittivity.

Time dependence is exp(-i omega t), so Im eps >= 0 for a lossy film.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from kerrlaw.core import EnergyScale
from kerrlaw.errors import DomainError, NoEnzPoint, SingularityError
from kerrlaw.kernels.photonic import EPS0, H_PLANCK, HBAR

# below this |eps| the ENZ closed form is treated as sitting on its pole
EPS_FLOOR = 1e-12


@dataclass(frozen=True)
class DrudeParams:
    """Drude model: eps(w) = eps_inf - omega_p^2 / (w^2 + i gamma w). Rates in rad/s."""

    omega_p: float
    gamma: float = 0.0
    eps_inf: float = 1.0

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("omega_p must be > 0")
        if self.gamma < 0:
            raise DomainError("gamma must be >= 0")


@dataclass(frozen=True)
class EnzSpec:
    drude: DrudeParams
    chi3_eff: float
    V_eff: float

    def __post_init__(self):
        if self.chi3_eff < 0:
            raise DomainError("chi3_eff must be >= 0")
        if not self.V_eff > 0:
            raise DomainError("V_eff must be > 0")


def drude_permittivity(p: DrudeParams, omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise DomainError("permittivity needs omega > 0")
    eps = p.eps_inf - p.omega_p**2 / (w**2 + 1j * p.gamma * w)
    return complex(eps) if eps.ndim == 0 else eps


def find_enz_frequency(p: DrudeParams, rtol: float = 1e-10) -> float:
    """Zero of Re eps on (0, 10 omega_p], found by bisection."""
    if p.eps_inf <= 0:
        raise NoEnzPoint(f"eps_inf={p.eps_inf} <= 0: Re eps never crosses zero")

    def re_eps(w):
        return drude_permittivity(p, w).real

    hi = 10.0 * p.omega_p
    # Re eps -> eps_inf - omega_p^2/gamma^2 as w -> 0
    lo = p.omega_p * 1e-9
    f_lo, f_hi = re_eps(lo), re_eps(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoEnzPoint(
            f"Re eps has no sign change on (0, 10 omega_p] "
            f"(eps_inf={p.eps_inf}, omega_p={p.omega_p:.4g}, gamma={p.gamma:.4g})"
        )
    return float(optimize.bisect(re_eps, lo, hi, xtol=1e-300, rtol=rtol, maxiter=500))


def e4_enz(spec: EnzSpec, omega: float, rel_unc: float = 0.0) -> EnergyScale:
    eps_abs = abs(drude_permittivity(spec.drude, omega))
    if eps_abs < EPS_FLOOR:
        raise SingularityError(
            f"|eps(omega)| = {eps_abs:.3e} at omega = {omega:.6g} rad/s: the ENZ quartic energy "
            "diverges here; add damping or move off the ENZ point"
        )
    energy = 3.0 * HBAR * omega**2 * spec.chi3_eff / (4.0 * EPS0**2 * eps_abs**2 * spec.V_eff)
    return EnergyScale(energy / H_PLANCK, rel_unc)
