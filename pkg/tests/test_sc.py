import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrlaw.core import EnergyScale
from kerrlaw.errors import DomainError, NoKerrFreePoint
from kerrlaw.kernels import sc


def junction(EJ, EC):
    return sc.JunctionParams(EnergyScale(EJ), EnergyScale(EC))


@pytest.mark.parametrize(
    "EJ, EC, expected, tol",
    [(14.8e9, 0.21e9, 0.411, 1e-3), (1e9, 0.5e9, 1.0, 1e-15), (10e9, 0.2e9, 0.4472136, 1e-7)],
)
def test_phi_zpf(EJ, EC, expected, tol):
    assert sc.phi_zpf(junction(EJ, EC)) == pytest.approx(expected, abs=tol)


def test_junction_rejects_nonpositive():
    with pytest.raises(DomainError):
        junction(0.0, 1.0)


class TestEta:
    def test_junction_step0(self):
        # (0.88 * 0.411)^2 (0.86 * 0.411)^2 at full precision
        v = sc.eta_junction(0.88, 0.86, 0.411).value
        assert v == pytest.approx(0.88**2 * 0.86**2 * 0.411**4, rel=1e-14)
        assert v == pytest.approx(0.016343, abs=1e-6)

    def test_quarton_rounded_amplitudes(self):
        assert sc.eta_quarton(0.362, 0.354).value == pytest.approx(0.01642, abs=1e-5)

    def test_junction_equals_quarton(self):
        phi = 0.41043736780
        a = sc.eta_junction(0.88, 0.86, phi).value
        b = sc.eta_quarton(0.88 * phi, 0.86 * phi).value
        assert a == b

    @pytest.mark.parametrize("args, expected", [((0.0, 0.5, 0.7), 0.0), ((1.0, 1.0, 1.0), 1.0)])
    def test_junction_trivial(self, args, expected):
        assert sc.eta_junction(*args).value == expected

    def test_junction_range(self):
        with pytest.raises(DomainError, match="p_A"):
            sc.eta_junction(1.3, 0.5, 0.4)

    def test_squid(self):
        eta = sc.eta_squid(junction(9.2e9, 198.72e6)).value
        assert eta == pytest.approx(2.7e-3, rel=1e-12)

    def test_fluxonium(self):
        assert sc.eta_fluxonium(0.5, 2.0 ** 0.5).value == pytest.approx(1.0)

    def test_uncertainty_split(self):
        assert sc.sc_eta_uncertainty(0.01, 0.02) == pytest.approx(0.015)


# --- SNAIL -------------------------------------------------------------------------

EJ = EnergyScale(1e9)


def test_snail_potential_at_zero_flux():
    spec = sc.SnailSpec(3, 0.29, EJ, 0.0)
    exp = sc.snail_expansion(spec)
    assert exp.phi_min == pytest.approx(0.0, abs=1e-12)
    assert exp.c2 == pytest.approx(1e9 * (1 / 3 + 0.29))
    assert exp.c4 == pytest.approx(-1e9 * (1 / 27 + 0.29))


def test_snail_spec_validation():
    with pytest.raises(DomainError):
        sc.SnailSpec(1, 0.29, EJ)
    with pytest.raises(DomainError):
        sc.SnailSpec(3, 0.0, EJ)


def test_kerr_free_flux_n3():
    f = sc.find_kerr_free_flux(3, 0.29, EJ)
    assert 0.0 < f < 0.5
    assert abs(sc.snail_c4(3, 0.29, EJ, f)) < 1e-9 * EJ.freq_equiv
    assert f == pytest.approx(0.40891, abs=1e-4)


def test_c4_single_sign_change_on_sweep():
    t0 = time.perf_counter()
    c4 = np.array([sc.snail_c4(3, 0.29, EJ, f) for f in np.linspace(0, 0.5, 1001)[1:-1]])
    elapsed = time.perf_counter() - t0
    s = np.sign(c4)
    assert np.count_nonzero(s[1:] != s[:-1]) == 1
    assert elapsed < 5.0


def test_no_kerr_free_point_for_small_alpha():
    with pytest.raises(NoKerrFreePoint, match="alpha"):
        sc.find_kerr_free_flux(3, 0.01, EJ)


def test_transmon_plasma_frequency():
    assert sc.transmon_plasma_frequency(junction(14.8e9, 0.21e9)) == pytest.approx(24.864e18 ** 0.5, rel=1e-14)


@pytest.mark.property
@given(
    N=st.integers(min_value=2, max_value=4),
    alpha=st.floats(min_value=0.05, max_value=0.6),
    flux=st.floats(min_value=0.0, max_value=0.5),
)
def test_snail_expansion_matches_finite_differences(N, alpha, flux):
    spec = sc.SnailSpec(N, alpha, EJ, flux)
    exp = sc.snail_expansion(spec)
    x = exp.phi_min

    def V(p):
        return sc.snail_potential(p, spec)

    def d1(p):
        return sc._derivatives(p, spec)[0]

    def d2(p):
        return sc._derivatives(p, spec)[1]

    # each order is checked against a difference of the order below it, down to V
    assert abs(d1(x)) < 1e-10 * EJ.freq_equiv
    h = 1e-4
    c2_fd = (V(x + h) - 2 * V(x) + V(x - h)) / h**2
    h = 1e-3
    c3_fd = (d2(x + h) - d2(x - h)) / (2 * h)
    c4_fd = (d2(x + h) - 2 * d2(x) + d2(x - h)) / h**2
    scale = EJ.freq_equiv
    assert c2_fd == pytest.approx(exp.c2, rel=1e-6, abs=1e-6 * scale)
    assert c3_fd == pytest.approx(exp.c3, rel=1e-6, abs=1e-6 * scale)
    assert c4_fd == pytest.approx(exp.c4, rel=1e-6, abs=1e-6 * scale)


@pytest.mark.property
@given(
    N=st.integers(min_value=2, max_value=4),
    alpha=st.floats(min_value=0.05, max_value=0.6),
    flux=st.floats(min_value=0.0, max_value=0.5),
)
def test_snail_minimum_is_global_on_grid(N, alpha, flux):
    spec = sc.SnailSpec(N, alpha, EJ, flux)
    exp = sc.snail_expansion(spec)
    grid = np.linspace(-np.pi * N, np.pi * N, 4001)
    assert sc.snail_potential(exp.phi_min, spec) <= sc.snail_potential(grid, spec).min() + 1e-9 * 1e9
    assert exp.c2 > 0
