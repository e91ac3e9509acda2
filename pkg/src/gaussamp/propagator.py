"""Closed-form evolution of the complex correlation matrix.

The channel acts as

    gamma(t) = S (gamma(0) - gamma_inf) S + gamma_inf,   S = [[M, -N], [-N, M]]

with ``M +/- N = exp(-(+/-eta + Gamma/2) t)`` and ``gamma_inf`` built from the
stationary pair (alpha, beta).
"""

from dataclasses import dataclass

import numpy as np

from .channel import ComplexCM, GaussianState, drift_rates
from .errors import RegimeViolation, SingularSystem
from .pauli import SIGMA0, SIGMA1, SIGMA3, mat_exp_oracle, pauli_exp

# relative threshold for the stationary-equation determinants
SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Propagator:
    M: np.ndarray
    N: np.ndarray
    t: float

    @property
    def plus(self):
        """``M + N = exp(-(eta + Gamma/2) t)``."""
        return self.M + self.N

    @property
    def minus(self):
        """``M - N = exp((eta - Gamma/2) t)``."""
        return self.M - self.N

    def s_matrix(self):
        return np.block([[self.M, -self.N], [-self.N, self.M]])


@dataclass(frozen=True, eq=False)
class ResiduePair:
    alpha: np.ndarray
    beta: np.ndarray

    def cm(self):
        """The stationary correlation matrix ``[[alpha, beta*], [beta, alpha*]]``."""
        return ComplexCM(self.alpha, self.beta)


def _from_coeffs(c0, c1, c3):
    return (c0 * SIGMA0 + c1 * SIGMA1 + c3 * SIGMA3).real


def compute_mn(params, t):
    """M and N at time ``t`` from the Pauli-basis closed form."""
    if t < 0:
        raise ValueError("t must be non-negative")
    c1, c2, _, _ = drift_rates(params)
    d = params.gamma3 / 2
    # exp(-(eta + Gamma/2)t) and exp((eta - Gamma/2)t)
    p = pauli_exp(c1, (params.eta1, 0.0, params.eta3 + d), t)
    q = pauli_exp(c2, (-params.eta1, 0.0, -params.eta3 + d), t)
    return Propagator(((p + q) / 2).real, ((p - q) / 2).real, t)


def compute_mn_exp(params, t):
    """Same as :func:`compute_mn` through generic matrix exponentials."""
    if t < 0:
        raise ValueError("t must be non-negative")
    eta = params.eta_matrix()
    half_gamma = params.gamma_matrix() / 2
    p = mat_exp_oracle(-(eta + half_gamma) * t)
    q = mat_exp_oracle((eta - half_gamma) * t)
    return Propagator(((p + q) / 2).real, ((p - q) / 2).real, t)


def _scale(params):
    return params.gamma0 + 2 * max(abs(params.eta0), abs(params.eta1), abs(params.eta3))


def _extended(params):
    """Rates in extended precision, so that near-resonant cancellations stay accurate."""
    ld = np.longdouble
    g1, g2 = ld(params.gamma1), ld(params.gamma2)
    return (g1 + g2) / 2, (g1 - g2) / 2, ld(params.eta0), ld(params.eta1), ld(params.eta3), ld(params.nbar0) + ld(0.5)


def _blocks(g0, g3, e0, e1, e3):
    g = np.array([[g0, 0, g3], [0, g0, 0], [g3, 0, g0]])
    e = 2 * np.array([[e0, e1, e3], [e1, e0, 0], [e3, 0, e0]])
    return g, e


def residue_general(params, refine=2):
    """Stationary (alpha, beta) from the Pauli-coefficient system.

    Solves ``G a - E b = (nbar0 + 1/2)(gamma0, 0, gamma3)`` and ``E a - G b = 0``
    for the real (sigma0, sigma1, sigma3) coefficients; the sigma2 part of alpha
    and all imaginary parts of beta vanish. ``refine`` rounds of iterative
    refinement with extended-precision residuals follow the first solve.
    """
    g, e = _blocks(params.gamma0, params.gamma3, params.eta0, params.eta1, params.eta3)
    g, e = g.astype(float), e.astype(float)
    tol = SINGULAR_TOL * _scale(params) ** 3
    if abs(np.linalg.det(g)) < tol:
        raise SingularSystem("damping matrix is singular (one mode undamped)")
    schur = g - e @ np.linalg.solve(g, e)
    if abs(np.linalg.det(schur)) < tol:
        raise SingularSystem("no stationary solution: G - E G^-1 E is singular")

    g0, g3, e0, e1, e3, nbar0p = _extended(params)
    g_ld, e_ld = _blocks(g0, g3, e0, e1, e3)
    system = np.block([[g_ld, -e_ld], [e_ld, -g_ld]]).astype(np.longdouble)
    rhs = np.array([nbar0p * g0, 0, nbar0p * g3, 0, 0, 0], dtype=np.longdouble)
    lu = system.astype(float)
    x = np.linalg.solve(lu, rhs.astype(float)).astype(np.longdouble)
    for _ in range(refine):
        x = x + np.linalg.solve(lu, (rhs - system @ x).astype(float))
    a, b = x[:3].astype(float), x[3:].astype(float)
    return ResiduePair(_from_coeffs(*a), _from_coeffs(*b))


def residue_eta3_zero(params):
    """Closed-form stationary pair for eta3 = 0."""
    if params.eta3 != 0:
        raise RegimeViolation("residue_eta3_zero requires eta3 = 0")
    g0, g3, e0, e1, _, nbar0p = _extended(params)
    g0s, g3s, e0s, e1s = g0**2, g3**2, e0**2, e1**2
    drive = g3s + 4 * e1s
    delta = (g0s - 4 * e0s) * ((g0 + 2 * e0) ** 2 - drive) * ((g0 - 2 * e0) ** 2 - drive)
    if abs(delta) < SINGULAR_TOL * _scale(params) ** 6:
        raise SingularSystem("no stationary solution: Delta vanishes")
    f = nbar0p / delta

    a0 = (g0s - 4 * e0s) * ((g0s - g3s) ** 2 + 4 * g3s * (e1s - e0s) - 4 * g0s * (e1s + e0s))
    a1 = 4 * e0 * e1 * ((2 * g0s - g3s) * (g0s - g3s) + 4 * g3s * (e1s - e0s) - 8 * g0s * e0s)
    a3 = g0 * g3 * (16 * (2 * e0s - e1s) * (e0s - e1s) + 4 * e1s * (g3s - g0s) - 8 * g0s * e0s)

    b0 = 2 * g0 * e0 * (g0s - 4 * e0s) * (g0s - g3s + 4 * (e1s - e0s))
    b1 = 2 * g0 * e1 * ((g0s - g3s) ** 2 + 8 * e0s * (2 * e1s - 2 * e0s - g3s) + 4 * e1s * (g3s - g0s))
    b3 = 2 * e0 * g3 * (16 * (e0s - e1s) ** 2 + g0s * (g3s - g0s - 8 * e1s) + 4 * g3s * (e1s - e0s))

    alpha = [float(f * c) for c in (a0, a1, a3)]
    beta = [float(f * c) for c in (b0, b1, b3)]
    return ResiduePair(_from_coeffs(*alpha), _from_coeffs(*beta))


def intermode_blocks(gamma3p, eta1p, nbar0):
    """Scalars (alpha_a, alpha_b, beta_c) of the inter-mode stationary state.

    The sigma3 part of alpha is ``-nbar0' gamma3p eta1p**2 / (1 - k**2)``: the
    more strongly damped mode ends up less populated.
    """
    one_minus_k2 = 1 - gamma3p**2 - eta1p**2
    if abs(one_minus_k2) < SINGULAR_TOL:
        raise SingularSystem("inter-mode stationary state is singular at k = 1")
    f = (nbar0 + 0.5) / one_minus_k2
    alpha_a = f * (1 - gamma3p**2 - gamma3p * eta1p**2)
    alpha_b = f * (1 - gamma3p**2 + gamma3p * eta1p**2)
    beta_c = f * eta1p * (1 - gamma3p**2)
    return alpha_a, alpha_b, beta_c


def residue_intermode(params):
    """Closed-form stationary pair for eta0 = eta3 = 0."""
    if params.eta0 != 0 or params.eta3 != 0:
        raise RegimeViolation("residue_intermode requires eta0 = eta3 = 0")
    g0, g3, _, e1, _, _ = _extended(params)
    blocks = intermode_blocks(g3 / g0, 2 * e1 / g0, np.longdouble(params.nbar0))
    alpha_a, alpha_b, beta_c = (float(x) for x in blocks)
    return ResiduePair(np.diag([alpha_a, alpha_b]), beta_c * SIGMA1.real)


def intermode_raw_form(params):
    """The same pair written in raw rates (gamma0, gamma3, eta1)."""
    g0, g3, _, e1, _, nbar0p = _extended(params)
    den = g0 * (g0**2 - g3**2 - 4 * e1**2)
    if abs(den) < SINGULAR_TOL * g0**3:
        raise SingularSystem("inter-mode stationary state is singular at k = 1")
    f = nbar0p / den
    a0, a3 = float(f * g0 * (g0**2 - g3**2)), float(-f * 4 * g3 * e1**2)
    b1 = float(2 * f * e1 * (g0**2 - g3**2))
    return ResiduePair(_from_coeffs(a0, 0.0, a3), _from_coeffs(0.0, b1, 0.0))


def evolve_cm(cm, prop, stationary):
    """Apply ``S (gamma - gamma_inf) S + gamma_inf`` to a correlation matrix."""
    s = prop.s_matrix()
    g_inf = stationary.full()
    return ComplexCM.from_full(s @ (cm.full() - g_inf) @ s + g_inf)


def evolve(state, params, t, residue=None):
    """Propagate a Gaussian state for time ``t``.

    Args:
        state (GaussianState): initial state
        params (ChannelParams): validated channel parameters
        t (float): elapsed time, in the same units as the rates
        residue (ResiduePair): optional precomputed stationary pair

    Returns:
        GaussianState: the evolved state

    Raises:
        SingularSystem: when the stationary equations have no solution
    """
    if residue is None:
        residue = residue_general(params)
    prop = compute_mn(params, t)
    cm = evolve_cm(state.cm, prop, residue.cm())
    # first moments follow the homogeneous flow acting on (m, m*)
    m = prop.M @ state.m - prop.N @ state.m.conj()
    return GaussianState(cm, m)
