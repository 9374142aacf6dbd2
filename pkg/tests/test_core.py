import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrlaw.core import (
    EnergyScale,
    ProjectionFactor,
    Regime,
    RegimeInputs,
    RegimeThresholds,
    classify_regime,
    invert_eta,
    monomial_from_ordered,
    percent_deviation,
    predict_cross_kerr,
    predict_self_kerr,
    propagate_uncertainty,
)
from kerrlaw.errors import DomainError

pos = st.floats(min_value=1e-6, max_value=1e12, allow_nan=False, allow_infinity=False)
nonneg = st.floats(min_value=0.0, max_value=1e12, allow_nan=False, allow_infinity=False)
frac = st.floats(min_value=0.0, max_value=0.5, allow_nan=False)
scale = st.sampled_from([0.0, 0.5, 1.0, 2.0, 4.0, 0.125, 1024.0])


def test_worked_example_product():
    p = predict_cross_kerr(ProjectionFactor(0.0244, 0.015), EnergyScale(14.8e9, 0.02))
    assert p.chi_over_2pi == pytest.approx(361.12e6, rel=1e-12)
    assert p.abs_unc == pytest.approx(12.6392e6, rel=1e-12)
    assert p.regime is Regime.UNKNOWN


@pytest.mark.parametrize(
    "eta, e4, expected",
    [(2.7e-3, 9.2e9, 24.84e6), (6.2e-8, 4.1e6, 0.2542), (0.0, 7e9, 0.0)],
)
def test_table_products(eta, e4, expected):
    chi = predict_cross_kerr(ProjectionFactor(eta), EnergyScale(e4)).chi_over_2pi
    assert chi == pytest.approx(expected, rel=1e-12, abs=0)


def test_self_kerr_charge_identity():
    EJ, EC = 14.8e9, 0.21e9
    phi = (2 * EC / EJ) ** 0.25
    k = predict_self_kerr(1.0, phi, EnergyScale(EJ)).chi_over_2pi
    assert k == pytest.approx(EC, rel=1e-12)


def test_self_kerr_hand_value():
    k = predict_self_kerr(1.0, 0.411, EnergyScale(14.8e9)).chi_over_2pi
    assert k == pytest.approx(0.5 * 0.411**4 * 14.8e9, rel=1e-14)
    assert k == pytest.approx(211.2e6, abs=0.1e6)


def test_uncertainty_linear_and_quadrature():
    assert propagate_uncertainty(0.02, 0.015) == pytest.approx(0.035)
    assert propagate_uncertainty(0.03, 0.04, quadrature=True) == pytest.approx(0.05)
    with pytest.raises(DomainError):
        propagate_uncertainty(-0.1, 0.0)


def test_invert_eta():
    eta = invert_eta(361.12e6, EnergyScale(14.8e9, 0.02))
    assert eta.value == pytest.approx(0.0244)
    assert eta.kernel == "inverted"
    with pytest.raises(DomainError, match="ill-posed"):
        invert_eta(1.0, EnergyScale(0.0))


def test_monomial_from_ordered():
    assert monomial_from_ordered(6.0) == 1.0


def test_percent_deviation():
    assert percent_deviation(361.12e6, 366e6) == pytest.approx(1.3333333, rel=1e-6)
    with pytest.raises(DomainError):
        percent_deviation(1.0, 0.0)


def test_value_types_reject_bad_input():
    with pytest.raises(DomainError):
        EnergyScale(-1.0)
    with pytest.raises(DomainError):
        EnergyScale(1.0, rel_unc=math.nan)
    with pytest.raises(DomainError):
        ProjectionFactor(-0.1)
    with pytest.raises(DomainError):
        RegimeInputs(1.0, 0.0)


class TestRegime:
    def test_strong(self):
        assert classify_regime(RegimeInputs(361e6, 5.12e9)) is Regime.STRONG

    def test_weak_needs_kappa(self):
        assert classify_regime(RegimeInputs(10.0, 5e9)) is Regime.INTERMEDIATE
        assert classify_regime(RegimeInputs(10.0, 5e9, kappa=1e3)) is Regime.WEAK

    def test_spacing_bound(self):
        # below kappa but above 1% of the spacing
        r = classify_regime(RegimeInputs(5e5, 5e9, kappa=1e6, mode_spacing=1e7))
        assert r is Regime.INTERMEDIATE

    def test_custom_thresholds(self):
        r = classify_regime(RegimeInputs(1e6, 1e9), RegimeThresholds(eps_freq=1e-4))
        assert r is Regime.STRONG


# --- invariants -------------------------------------------------------------------


@pytest.mark.property
@given(eta=nonneg.map(lambda x: x * 1e-12), e4=nonneg, a=scale, b=scale)
def test_bilinearity(eta, e4, a, b):
    base = predict_cross_kerr(ProjectionFactor(eta), EnergyScale(e4)).chi_over_2pi
    left = predict_cross_kerr(ProjectionFactor(a * eta), EnergyScale(e4)).chi_over_2pi
    right = predict_cross_kerr(ProjectionFactor(eta), EnergyScale(b * e4)).chi_over_2pi
    # power-of-two scale factors keep these products exact in floating point
    assert left == a * base
    assert right == b * base


@pytest.mark.property
@given(eta=pos.map(lambda x: x * 1e-12), e4=pos)
def test_inversion_round_trip(eta, e4):
    chi = predict_cross_kerr(ProjectionFactor(eta), EnergyScale(e4)).chi_over_2pi
    back = invert_eta(chi, EnergyScale(e4)).value
    assert back == pytest.approx(eta, rel=1e-12)


@pytest.mark.property
@given(phi=st.floats(min_value=0.0, max_value=2.0), e4=nonneg)
def test_self_cross_half_factor(phi, e4):
    k = predict_self_kerr(1.0, phi, EnergyScale(e4)).chi_over_2pi
    chi = predict_cross_kerr(ProjectionFactor(phi**4), EnergyScale(e4)).chi_over_2pi
    assert k == pytest.approx(0.5 * chi, rel=1e-14, abs=0)


@pytest.mark.property
@given(eta=pos.map(lambda x: x * 1e-12), e4=pos, r1=frac, r2=frac)
def test_uncertainty_is_linear_sum(eta, e4, r1, r2):
    p = predict_cross_kerr(ProjectionFactor(eta, r2), EnergyScale(e4, r1))
    assert p.rel_unc == pytest.approx(r1 + r2, rel=1e-12, abs=1e-15)
    q = predict_cross_kerr(ProjectionFactor(eta, r2), EnergyScale(e4, r1), quadrature=True)
    assert q.abs_unc <= p.abs_unc * (1 + 1e-12)


@pytest.mark.property
@given(chi=st.floats(min_value=-1e9, max_value=1e9), omega=pos, kappa=st.one_of(st.none(), pos))
def test_regime_is_total_and_strong_is_monotone(chi, omega, kappa):
    r = classify_regime(RegimeInputs(chi, omega, kappa))
    assert r in (Regime.WEAK, Regime.INTERMEDIATE, Regime.STRONG)
    if abs(chi) / omega >= 0.01:
        assert r is Regime.STRONG
        assert classify_regime(RegimeInputs(2 * chi, omega, kappa)) is Regime.STRONG
