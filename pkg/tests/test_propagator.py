import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_params
from gaussamp.channel import ChannelParams, ComplexCM, GaussianState
from gaussamp.errors import RegimeViolation, SingularSystem
from gaussamp.oracle import integrate_mn_ode, residual_alpha_beta
from gaussamp.propagator import (
    compute_mn,
    compute_mn_exp,
    evolve,
    evolve_cm,
    intermode_raw_form,
    intermode_blocks,
    residue_eta3_zero,
    residue_general,
    residue_intermode,
    ResiduePair,
)


def pair_gap(a, b):
    return max(np.abs(a.alpha - b.alpha).max(), np.abs(a.beta - b.beta).max())


def test_mn_at_zero_time():
    prop = compute_mn(ChannelParams(0.2, 0.4, 0.1, 1.3, 0.7), 0.0)
    assert np.array_equal(prop.M, np.eye(2)) and not prop.N.any()


def test_pure_damping_decouples():
    p = ChannelParams(gamma1=1.4, gamma2=0.6)
    prop = compute_mn(p, 2.0)
    assert np.allclose(prop.M, np.diag([np.exp(-1.4), np.exp(-0.6)]), atol=1e-15)
    assert not prop.N.any()


def test_mn_against_rk4():
    p = ChannelParams(0.2, 0.4, 0.1, 1.3, 0.7)
    a, b = compute_mn(p, 2.0), integrate_mn_ode(p, 2.0, 4000)
    assert np.abs(a.M - b.M).max() <= 1e-8
    assert np.abs(a.N - b.N).max() <= 1e-8


def test_plus_minus_are_the_two_exponentials():
    p = ChannelParams(0.2, 0.4, 0.1, 1.3, 0.7)
    prop, ref = compute_mn(p, 1.5), compute_mn_exp(p, 1.5)
    assert np.allclose(prop.plus, ref.plus, atol=1e-13)
    assert np.allclose(prop.minus, ref.minus, atol=1e-13)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        compute_mn(ChannelParams(), -1.0)


def test_commuting_generators_are_diagonal():
    p = ChannelParams(eta0=0.3, eta3=0.2, gamma1=1.5, gamma2=0.5)
    prop = compute_mn_exp(p, 1.2)
    assert prop.M[0, 1] == 0 and prop.N[0, 1] == 0
    assert prop.plus[0, 0] == pytest.approx(np.exp(-(0.5 + 0.75) * 1.2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closed_form_vs_series(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    t = p.time(rng.uniform(0, 5))
    a, b = compute_mn(p, t), compute_mn_exp(p, t)
    size = max(1.0, np.abs(b.M).max())
    assert np.abs(a.M - b.M).max() <= 1e-12 * size
    assert np.abs(a.N - b.N).max() <= 1e-12 * size


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2), st.floats(0, 2))
def test_semigroup_of_exponentials(seed, s, u):
    p = random_params(np.random.default_rng(seed))
    ab = compute_mn(p, s).plus @ compute_mn(p, u).plus
    whole = compute_mn(p, s + u).plus
    assert np.abs(ab - whole).max() <= 1e-11 * max(1.0, np.abs(whole).max())


def test_thermal_equilibrium_without_drive():
    pair = residue_general(ChannelParams(gamma1=1.7, gamma2=0.3, nbar0=0.4))
    assert np.allclose(pair.alpha, 0.9 * np.eye(2), atol=1e-15)
    assert not np.abs(pair.beta).max() > 1e-15
    exact = ResiduePair(0.9 * np.eye(2), np.zeros((2, 2)))
    assert residual_alpha_beta(ChannelParams(gamma1=1.7, gamma2=0.3, nbar0=0.4), exact) == (0.0, 0.0)


def test_residue_is_hermitian_and_symmetric():
    pair = residue_general(ChannelParams(0.1, 0.3, -0.2, 1.2, 0.9, 0.3))
    assert np.allclose(pair.alpha, pair.alpha.conj().T)
    assert np.allclose(pair.beta, pair.beta.T)


def test_residue_closed_forms_agree_with_solve():
    p = ChannelParams(eta0=0.25, eta1=0.3, gamma1=1.4, gamma2=0.6, nbar0=0.1)
    assert pair_gap(residue_eta3_zero(p), residue_general(p)) <= 1e-12
    q = ChannelParams(eta1=0.3, gamma1=1.4, gamma2=0.6, nbar0=0.1)
    for form in (residue_eta3_zero, residue_intermode, intermode_raw_form):
        assert pair_gap(form(q), residue_general(q)) <= 1e-12


def test_intermode_residue_example():
    pair = residue_intermode(ChannelParams.normalized(eta1p=0.5))
    assert np.allclose(pair.alpha, np.eye(2) * 2 / 3, atol=1e-15)
    assert np.allclose(pair.beta, np.array([[0, 1], [1, 0]]) / 3, atol=1e-15)


def test_damping_asymmetry_populates_weaker_mode():
    a_a, a_b, _ = intermode_blocks(0.4, 0.5, 0.0)
    assert a_a < a_b


@settings(max_examples=80)
@given(st.floats(0, 0.95), st.floats(0, 0.95), st.floats(0, 2))
def test_intermode_forms_agree(g3p, e1p, n):
    p = ChannelParams.normalized(eta1p=e1p, gamma3p=g3p, nbar0=n)
    if abs(1 - p.k) < 1e-3:
        return
    assert pair_gap(residue_intermode(p), intermode_raw_form(p)) <= 1e-12 * max(1, 1 / abs(1 - p.k**2))


def test_closed_forms_check_their_domain():
    with pytest.raises(RegimeViolation):
        residue_eta3_zero(ChannelParams(eta3=0.1))
    with pytest.raises(RegimeViolation):
        residue_intermode(ChannelParams(eta0=0.1))


def test_singular_on_symmetric_resonance():
    # 1 - eta0' = k exactly: C2 = B1
    p = ChannelParams.normalized(eta0p=0.5, eta1p=0.3, gamma3p=0.4)
    with pytest.raises(SingularSystem):
        residue_general(p)
    with pytest.raises(SingularSystem):
        intermode_blocks(0.6, 0.8, 0.0)


def test_evolve_at_zero_time_is_identity():
    s = GaussianState(ComplexCM.xp_symmetric(0.8, 0.7, 0.2), m=[0.3 + 0.1j, -0.2])
    p = ChannelParams(0.1, 0.4, 0.2, 1.2, 0.8, 0.3)
    out = evolve(s, p, 0.0)
    assert out.cm.allclose(s.cm, 1e-15)
    assert np.allclose(out.m, s.m)


def test_stationary_state_is_fixed():
    p = ChannelParams(0.1, 0.4, 0.2, 1.2, 0.8, 0.3)
    pair = residue_general(p)
    for t in (0.5, 3.0, 20.0):
        out = evolve(GaussianState(pair.cm()), p, t, residue=pair)
        assert out.cm.allclose(pair.cm(), 1e-12)


def test_weak_vacuum_relaxes_to_residue():
    p = ChannelParams.normalized(eta1p=0.5, gamma3p=0.3, nbar0=0.1)
    out = evolve(GaussianState.vacuum(), p, p.time(30.0))
    assert out.cm.allclose(residue_intermode(p).cm(), 1e-10)


def test_first_moment_follows_homogeneous_flow():
    p = ChannelParams(0.0, 0.3, 0.0, 1.0, 1.0)
    m0 = np.array([1.0 + 0.5j, 0.0])
    t = 0.8
    out = evolve(GaussianState(ComplexCM.vacuum(), m0), p, t)
    # m = M m0 - N m0* obeys dm/dt = -(Gamma/2) m + eta m*; RK4 on (Re m, Im m)
    eta, g = p.eta_matrix(), p.gamma_matrix() / 2
    x, y = m0.real.copy(), m0.imag.copy()
    h = t / 2000
    f = lambda x, y: (-(g @ x) + eta @ x, -(g @ y) - eta @ y)  # noqa: E731
    for _ in range(2000):
        k1 = f(x, y)
        k2 = f(x + h / 2 * k1[0], y + h / 2 * k1[1])
        k3 = f(x + h / 2 * k2[0], y + h / 2 * k2[1])
        k4 = f(x + h * k3[0], y + h * k3[1])
        x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y = y + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    assert np.allclose(out.m, x + 1j * y, atol=1e-12)


def test_evolve_cm_with_identity_propagator():
    p = ChannelParams(eta1=0.2)
    cm = ComplexCM.thermal(0.3)
    out = evolve_cm(cm, compute_mn(p, 0.0), residue_general(p).cm())
    assert out.allclose(cm, 1e-15)
