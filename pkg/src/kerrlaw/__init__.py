"""Kerr coupling rates from the factorization chi/2pi = eta * E4 / h.

Platform kernels (superconducting, photonic, ENZ) supply the quartic
energy scale E4 and the projection factor eta; ``kerrlaw.fock`` checks the
law against brute-force diagonalization.
"""

from kerrlaw.core import (
    DEFAULT_THRESHOLDS,
    EnergyScale,
    KerrPrediction,
    ProjectionFactor,
    Regime,
    RegimeInputs,
    RegimeThresholds,
    classify_regime,
    invert_eta,
    percent_deviation,
    predict_cross_kerr,
    predict_self_kerr,
    propagate_uncertainty,
)
from kerrlaw.errors import (
    DeviceFileError,
    DomainError,
    KerrError,
    NumericalError,
    StrongMixing,
    UnsupportedPlatform,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_THRESHOLDS",
    "DeviceFileError",
    "DomainError",
    "EnergyScale",
    "KerrError",
    "KerrPrediction",
    "NumericalError",
    "ProjectionFactor",
    "Regime",
    "RegimeInputs",
    "RegimeThresholds",
    "StrongMixing",
    "UnsupportedPlatform",
    "classify_regime",
    "invert_eta",
    "percent_deviation",
    "predict_cross_kerr",
    "predict_self_kerr",
    "propagate_uncertainty",
]
