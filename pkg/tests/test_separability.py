import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussamp.channel import ChannelParams, ComplexCM, GaussianState
from gaussamp.errors import MalformedCM, RegimeViolation, SingularSystem
from gaussamp.propagator import compute_mn, evolve, intermode_blocks, residue_eta3_zero, residue_intermode
from gaussamp.separability import (
    Decision,
    Verdict,
    XpSymmetricState,
    complex_to_real_cm,
    intermode_mn,
    is_physical,
    ppt_general,
    ppt_xp_symmetric,
    strong_asymptotic_criterion,
    strong_finite_time_criterion,
    strong_finite_time_state,
    strong_polynomial,
    symmetric_quartic_coeffs,
    symmetric_quartic_criterion,
    symplectic_eigenvalues,
    weak_intermode_criterion,
)


def test_boundary_counts_as_separable():
    assert Verdict.from_margin(0.0).decision is Decision.SEPARABLE
    assert Verdict.from_margin(-1e-300).decision is Decision.ENTANGLED
    assert Verdict.from_margin(2.0).separable


def test_vacuum_sits_on_the_border():
    v = ppt_general(ComplexCM.vacuum())
    assert v.margin == 0.0 and v.separable


def test_thermal_product_is_separable():
    v = ppt_general(ComplexCM.thermal(0.4))
    assert v.separable and v.margin > 0


def test_ppt_rejects_malformed_input():
    with pytest.raises(MalformedCM):
        ppt_general(ComplexCM(np.array([[1, 2], [0, 1]]), np.zeros((2, 2))))


def test_xp_examples():
    assert ppt_xp_symmetric(XpSymmetricState(0.5, 0.5, 0.0)).margin == 0.0
    v = ppt_xp_symmetric(XpSymmetricState(2 / 3, 2 / 3, 1 / 3))
    assert v.margin == pytest.approx((1 / 6) ** 2 - (1 / 3) ** 2)
    assert v.decision is Decision.ENTANGLED


@settings(max_examples=200)
@given(st.floats(0.5, 3), st.floats(0.5, 3), st.floats(-2, 2))
def test_xp_reduction_matches_general(a, b, c):
    s = XpSymmetricState(a, b, c)
    if not is_physical(s.cm()):
        return
    x, g = ppt_xp_symmetric(s).margin, ppt_general(s.cm()).margin
    if abs(x) > 1e-9:
        assert (x >= 0) == (g >= 0)


def test_residue_state_sign_matches_weak_criterion():
    s = XpSymmetricState(*intermode_blocks(0.3, 0.6, 0.1))
    assert ppt_xp_symmetric(s).decision == weak_intermode_criterion(0.3, 0.6, 0.1).decision


def test_weak_threshold_exact():
    assert weak_intermode_criterion(0.0, 0.6, 0.3).margin == pytest.approx(0.0, abs=1e-15)
    assert weak_intermode_criterion(0.0, 0.59, 0.3).separable
    assert not weak_intermode_criterion(0.0, 0.61, 0.3).separable


def test_zero_temperature_asymmetric_damping():
    assert weak_intermode_criterion(0.5, 0.0, 0.0).separable
    assert not weak_intermode_criterion(0.5, 0.1, 0.0).separable


def test_weak_criterion_regime_gate():
    with pytest.raises(RegimeViolation, match="k < 1"):
        weak_intermode_criterion(0.0, 1.5, 0.1)


def test_intermode_state_limits():
    p = ChannelParams.normalized(eta1p=0.6, gamma3p=0.3, nbar0=0.2)
    s0 = strong_finite_time_state(p, 0.0)
    assert (s0.alpha_a, s0.alpha_b, s0.beta_c) == (0.5, 0.5, 0.0)
    late = strong_finite_time_state(p, 30.0)
    assert np.allclose((late.alpha_a, late.alpha_b, late.beta_c), intermode_blocks(0.3, 0.6, 0.2), atol=1e-10)


@pytest.mark.parametrize("k", [0.5, 1.0, 1.4])
def test_intermode_state_matches_propagator(k):
    g3p = 0.3
    p = ChannelParams.normalized(eta1p=math.sqrt(k * k - g3p**2), gamma3p=g3p, nbar0=0.15)
    if k == 1.0:
        # no stationary pair at k = 1; check M, N against the propagator instead
        with pytest.raises(SingularSystem):
            strong_finite_time_state(p, 1.5)
        ma, mb, nc = intermode_mn(p, 1.5)
        prop = compute_mn(p, p.time(1.5))
        assert (ma, mb, nc) == pytest.approx((prop.M[0, 0], prop.M[1, 1], prop.N[0, 1]), abs=1e-12)
        return
    s = strong_finite_time_state(p, 1.5)
    cm = evolve(GaussianState.vacuum(), p, p.time(1.5)).cm
    assert s.alpha_a == pytest.approx(cm.X[0, 0].real, abs=1e-12)
    assert s.alpha_b == pytest.approx(cm.X[1, 1].real, abs=1e-12)
    assert s.beta_c == pytest.approx(cm.Y[0, 1].real, abs=1e-12)


def test_strong_polynomial_vanishes_at_start():
    assert strong_polynomial(0.3, 1.5, 0.2, 0.0) == 0.0
    assert strong_finite_time_criterion(ChannelParams.normalized(eta1p=1.5, gamma3p=0.3, nbar0=0.2), 0.0).separable


@pytest.mark.parametrize("tp", [0.1, 1.0, 3.0])
def test_cold_strong_amplifier_entangles(tp):
    p = ChannelParams.normalized(eta1p=1.3)
    v = strong_finite_time_criterion(p, tp)
    assert v.decision is Decision.ENTANGLED
    assert v.direct_margin < 0


def test_strong_criterion_reports_all_margins():
    p = ChannelParams.normalized(eta1p=1.5, gamma3p=0.2, nbar0=0.1)
    v = strong_finite_time_criterion(p, 2.0)
    assert v.margin < 0 and v.direct_margin < 0
    assert v.alternate_margin != v.margin


def test_alternate_polynomial_discrepancy_is_logged(caplog):
    # a point where the alternate polynomial has the wrong sign
    p = ChannelParams.normalized(eta1p=1.4804613399317739, gamma3p=0.46031781185070675, nbar0=0.7767243990732853)
    with caplog.at_level(logging.INFO, logger="gaussamp.separability"):
        v = strong_finite_time_criterion(p, 0.8588204154912449)
    assert v.alternate_margin < 0 < v.margin and v.direct_margin > 0
    assert "gamma3p=0.46031781185070675" in caplog.text


def test_strong_criteria_need_strong_regime():
    with pytest.raises(RegimeViolation):
        strong_finite_time_criterion(ChannelParams.normalized(eta1p=0.5), 1.0)
    with pytest.raises(RegimeViolation):
        strong_finite_time_criterion(ChannelParams.normalized(eta1p=1.5, eta0p=0.1), 1.0)
    with pytest.raises(RegimeViolation):
        strong_asymptotic_criterion(0.0, 0.9, 0.1)


def test_asymptotic_examples():
    assert strong_asymptotic_criterion(0.0, 1.4, 0.7).margin == pytest.approx(0.0, abs=1e-14)
    assert not strong_asymptotic_criterion(0.5, 1.2, 0.0).separable


def test_quartic_factorizes_at_zero_symmetric_drive():
    for g3p in (0.0, 0.3, 0.7):
        for n in (0.0, 0.2, 0.9):
            s0, s1, s2 = symmetric_quartic_coeffs(0.0, g3p, n)
            a = 1 - g3p**2 * (2 * n + 1) ** 2
            lo, hi = 4 * n * n * (1 - g3p**2), 4 * (n + 1) ** 2 * (1 - g3p**2)
            assert s2 == pytest.approx(a * a, abs=1e-12)
            assert s1 == pytest.approx(-a * (lo + hi), abs=1e-12)
            assert s0 == pytest.approx(lo * hi, abs=1e-12)


@given(st.floats(-0.9, 0.9), st.floats(0, 0.9), st.floats(0, 3))
def test_no_entanglement_without_intermode_drive(e0p, g3p, n):
    s0, _, _ = symmetric_quartic_coeffs(e0p, g3p, n)
    assert s0 >= 0


def test_quartic_matches_state_at_half_symmetric_drive():
    for g3p in (0.0, 0.1, 0.2, 0.3):
        for n in (0.0, 0.1, 0.3):
            for e1p in (0.05, 0.15, 0.25):
                p = ChannelParams.normalized(eta0p=0.5, eta1p=e1p, gamma3p=g3p, nbar0=n)
                if not 0.5 > p.k + 1e-6:
                    continue
                q = symmetric_quartic_criterion(p).margin
                s = ppt_general(residue_eta3_zero(p).cm()).margin
                assert (q >= 0) == (s >= 0)


def test_quartic_reduces_to_weak_at_zero_eta0():
    p = ChannelParams.normalized(eta1p=0.5, gamma3p=0.3, nbar0=0.1)
    assert symmetric_quartic_criterion(p).decision == weak_intermode_criterion(0.3, 0.5, 0.1).decision
    assert symmetric_quartic_criterion(ChannelParams.normalized(eta0p=0.4, gamma3p=0.3)).separable


def test_quartic_regime_gate():
    with pytest.raises(RegimeViolation):
        symmetric_quartic_criterion(ChannelParams.normalized(eta0p=0.8, eta1p=0.5))
    with pytest.raises(RegimeViolation):
        symmetric_quartic_criterion(ChannelParams.normalized(eta3p=0.1, eta1p=0.2))


def test_real_cm_conventions():
    assert np.allclose(complex_to_real_cm(ComplexCM.vacuum()), 0.5 * np.eye(4))
    assert np.allclose(complex_to_real_cm(ComplexCM.thermal(0.4)), 0.9 * np.eye(4))
    assert symplectic_eigenvalues(complex_to_real_cm(ComplexCM.vacuum())) == pytest.approx((0.5, 0.5))
    assert symplectic_eigenvalues(complex_to_real_cm(ComplexCM.thermal(0.4))) == pytest.approx((0.9, 0.9))


@given(st.floats(0.5, 3), st.floats(0.5, 3), st.floats(-0.4, 0.4))
def test_xp_symplectic_spectrum(a, b, c):
    v = complex_to_real_cm(ComplexCM.xp_symmetric(a, b, c))
    got = sorted(symplectic_eigenvalues(v))
    direct = sorted(np.abs(np.linalg.eigvals(1j * np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]) @ v)))
    root = math.sqrt((a + b) ** 2 - 4 * c * c)
    expected = sorted(((root + s * abs(b - a)) / 2 for s in (1, -1)))
    assert got == pytest.approx(expected, rel=1e-10)
    assert got == pytest.approx(direct[::2], rel=1e-10)


def test_strong_evolution_stays_physical():
    p = ChannelParams.normalized(eta1p=1.6, gamma3p=0.4, nbar0=0.2)
    cm = evolve(GaussianState.vacuum(), p, p.time(1.0)).cm
    assert min(symplectic_eigenvalues(complex_to_real_cm(cm))) >= 0.5 - 1e-9
    assert is_physical(cm)
    assert not is_physical(ComplexCM.thermal(-0.3))


def test_residue_intermode_sign_matches_weak_on_grid():
    for g3p in np.linspace(0, 0.9, 7):
        for n in (0.0, 0.1, 0.4):
            for f in (0.2, 0.5, 0.9):
                e1p = f * math.sqrt(1 - g3p**2)
                p = ChannelParams.normalized(eta1p=e1p, gamma3p=g3p, nbar0=n)
                w = weak_intermode_criterion(g3p, e1p, n).margin
                s = ppt_general(residue_intermode(p).cm()).margin
                if abs(w) > 1e-9 and abs(s) > 1e-9:
                    assert (w >= 0) == (s >= 0)
