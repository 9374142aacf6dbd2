"""Platform-independent Kerr factorization.

Every energy is carried as its frequency equivalent E/h in Hz, so a
coupling rate chi/2pi is simply ``eta * E4`` with no Planck constant in
sight. Signs live in the monomial coefficient; ``EnergyScale`` and
``ProjectionFactor`` values are nonnegative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

from kerrlaw.errors import DomainError

# 4!/(2!2!): how often phi_A^2 phi_B^2 appears in the ordered-index sum.
ORDERED_MULTIPLICITY = 6


class Regime(str, enum.Enum):
    WEAK = "weak"
    INTERMEDIATE = "intermediate"
    STRONG = "strong"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EnergyScale:
    """Energy as a frequency equivalent.

    Parameters
    ----------
    freq_equiv : float
        E/h in Hz.
    rel_unc : float
        Relative (1-sigma) uncertainty, dimensionless.
    """

    freq_equiv: float
    rel_unc: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.freq_equiv) or self.freq_equiv < 0:
            raise DomainError(f"energy scale must be finite and >= 0, got {self.freq_equiv!r}")
        if not math.isfinite(self.rel_unc) or self.rel_unc < 0:
            raise DomainError(f"relative uncertainty must be >= 0, got {self.rel_unc!r}")

    def scaled(self, factor: float) -> "EnergyScale":
        return replace(self, freq_equiv=self.freq_equiv * factor)


@dataclass(frozen=True)
class ProjectionFactor:
    """Dimensionless projection coefficient with the kernel that produced it."""

    value: float
    rel_unc: float = 0.0
    kernel: str = "user"

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise DomainError(f"projection factor must be finite and >= 0, got {self.value!r}")
        if not math.isfinite(self.rel_unc) or self.rel_unc < 0:
            raise DomainError(f"relative uncertainty must be >= 0, got {self.rel_unc!r}")


@dataclass(frozen=True)
class KerrPrediction:
    chi_over_2pi: float
    abs_unc: float
    regime: Regime = Regime.UNKNOWN
    deviation_pct: Optional[float] = None

    @property
    def rel_unc(self) -> float:
        if self.chi_over_2pi == 0:
            return 0.0
        return self.abs_unc / abs(self.chi_over_2pi)


@dataclass(frozen=True)
class RegimeInputs:
    """Frequency scales used to place a coupling in a nonlinear regime (all Hz)."""

    chi: float
    omega: float
    kappa: Optional[float] = None
    mode_spacing: Optional[float] = None

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be > 0, got {self.omega!r}")
        for name in ("kappa", "mode_spacing"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be > 0 when given, got {v!r}")


@dataclass(frozen=True)
class RegimeThresholds:
    # RWA validity needs chi/omega << 1; 1% is our cut, not a published number.
    eps_freq: float = 0.01
    eps_spacing: float = 0.01


DEFAULT_THRESHOLDS = RegimeThresholds()


def propagate_uncertainty(rel_e4: float, rel_eta: float, quadrature: bool = False) -> float:
    """Relative uncertainty of chi from those of E4 and eta.

    The default is the first-order linear sum. ``quadrature=True`` gives the
    root-sum-square instead, useful only for sensitivity comparisons.
    """
    if rel_e4 < 0 or rel_eta < 0:
        raise DomainError("relative uncertainties must be >= 0")
    if quadrature:
        return math.hypot(rel_e4, rel_eta)
    return rel_e4 + rel_eta


def predict_cross_kerr(
    eta: ProjectionFactor, e4: EnergyScale, quadrature: bool = False
) -> KerrPrediction:
    chi = eta.value * e4.freq_equiv
    rel = propagate_uncertainty(e4.rel_unc, eta.rel_unc, quadrature=quadrature)
    return KerrPrediction(chi_over_2pi=chi, abs_unc=abs(chi) * rel)


def predict_self_kerr(
    c_aaaa: float, phi_zpf: float, e4: EnergyScale, quadrature: bool = False
) -> KerrPrediction:
    """Self-Kerr K/2pi in the ``hbar K/2 n(n-1)`` convention.

    ``c_aaaa`` is the signed coefficient of ``phi^4/4!`` in units of E4.
    Only the uncertainty of E4 is propagated; phi_zpf is taken as exact.
    """
    if phi_zpf < 0:
        raise DomainError(f"phi_zpf must be >= 0, got {phi_zpf!r}")
    k = e4.freq_equiv * 0.5 * c_aaaa * phi_zpf**4
    rel = propagate_uncertainty(e4.rel_unc, 0.0, quadrature=quadrature)
    return KerrPrediction(chi_over_2pi=k, abs_unc=abs(k) * rel)


def monomial_from_ordered(c_bar: float) -> float:
    """Monomial coefficient c_AABB from the ordered-index tensor element."""
    return c_bar / ORDERED_MULTIPLICITY


def invert_eta(chi_meas: float, e4: EnergyScale) -> ProjectionFactor:
    """Projection factor implied by a measured rate ``chi_meas`` (Hz)."""
    if e4.freq_equiv <= 0:
        raise DomainError("cannot invert eta with E4 = 0: the inversion is ill-posed")
    return ProjectionFactor(
        value=abs(chi_meas) / e4.freq_equiv, rel_unc=e4.rel_unc, kernel="inverted"
    )


def percent_deviation(pred: float, meas: float) -> float:
    if meas == 0:
        raise DomainError("percent deviation is undefined for a zero measured value")
    return 100.0 * abs(pred - meas) / abs(meas)


def classify_regime(
    inputs: RegimeInputs, thresholds: RegimeThresholds = DEFAULT_THRESHOLDS
) -> Regime:
    """Weak / intermediate / strong classification of a Kerr shift.

    Weak requires a linewidth: the shift must sit below kappa and below
    ``eps_spacing`` times the mode spacing when that is known. Without a
    linewidth the best we can say is intermediate.
    """
    chi = abs(inputs.chi)
    if chi / inputs.omega >= thresholds.eps_freq:
        return Regime.STRONG
    if inputs.kappa is not None:
        bound = inputs.kappa
        if inputs.mode_spacing is not None:
            bound = min(bound, thresholds.eps_spacing * inputs.mode_spacing)
        if chi < bound:
            return Regime.WEAK
    return Regime.INTERMEDIATE
