"""Separability criteria for two-mode Gaussian states.

Every criterion returns a :class:`Verdict` whose ``margin`` is the
left-hand side minus the right-hand side of a ">= 0" inequality, so a
non-negative margin means separable.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .channel import BOUNDARY_TOL, ComplexCM, Regime, classify_regime
from .errors import RegimeViolation
from .pauli import SIGMA3
from .propagator import intermode_blocks

log = logging.getLogger(__name__)

# |margin| below this is treated as "on the border" by equivalence checks
MARGIN_BAND = 1e-9


class Decision(str, enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    margin: float

    @classmethod
    def from_margin(cls, margin):
        margin = float(margin)
        return cls(Decision.SEPARABLE if margin >= 0 else Decision.ENTANGLED, margin)

    @property
    def separable(self):
        return self.decision is Decision.SEPARABLE


@dataclass(frozen=True)
class StrongVerdict(Verdict):
    """Finite-time strong-amplifier verdict carrying all three evaluations.

    ``margin`` is the K1/K2 polynomial with its sign error fixed,
    ``alternate_margin`` the variant polynomial with the other cross-term factor, and
    ``direct_margin`` the x-p symmetric criterion on the evolved state.
    """

    alternate_margin: float = math.nan
    direct_margin: float = math.nan


@dataclass(frozen=True)
class XpSymmetricState:
    alpha_a: float
    alpha_b: float
    beta_c: float

    def cm(self):
        return ComplexCM.xp_symmetric(self.alpha_a, self.alpha_b, self.beta_c)


def _block(alpha, beta):
    return np.array([[alpha, np.conj(beta)], [beta, np.conj(alpha)]], dtype=complex)


def _det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def ppt_general(cm):
    """Peres-Horodecki criterion on the 2x2 mode blocks of a complex CM.

    With ``gamma_i = [[alpha_i, beta_i*], [beta_i, alpha_i*]]`` for i = a, b, c
    the state is separable iff

        det ga det gb + (1/4 - |det gc|)**2 - tr(ga s3 gc s3 gb s3 gc^dag s3)
            >= (det ga + det gb)/4
    """
    cm.check()
    x, y = cm.X, cm.Y
    ga = _block(x[0, 0], y[0, 0])
    gb = _block(x[1, 1], y[1, 1])
    gc = _block(x[0, 1], y[0, 1])
    det_a, det_b, det_c = _det2(ga).real, _det2(gb).real, _det2(gc).real
    s3 = SIGMA3
    cross = np.trace(ga @ s3 @ gc @ s3 @ gb @ s3 @ gc.conj().T @ s3).real
    lhs = det_a * det_b + (0.25 - abs(det_c)) ** 2 - cross
    return Verdict.from_margin(lhs - 0.25 * (det_a + det_b))


def ppt_xp_symmetric(s):
    return Verdict.from_margin((s.alpha_a - 0.5) * (s.alpha_b - 0.5) - s.beta_c**2)


def _require_intermode(gamma3p, eta1p, want):
    k = math.hypot(gamma3p, eta1p)
    if want is Regime.WEAK and not k < 1 - BOUNDARY_TOL:
        raise RegimeViolation(f"weak inter-mode regime needs k < 1, got k = {k:.12g}")
    if want is Regime.STRONG and not k > 1 + BOUNDARY_TOL:
        raise RegimeViolation(f"strong inter-mode regime needs k > 1, got k = {k:.12g}")
    return k


def weak_intermode_criterion(gamma3p, eta1p, nbar0):
    """Asymptotic criterion for a weak inter-mode amplifier (k < 1)."""
    _require_intermode(gamma3p, eta1p, Regime.WEAK)
    g2 = gamma3p**2
    margin = 4 * nbar0**2 * (1 - g2) - (1 - g2 * (2 * nbar0 + 1) ** 2) * eta1p**2
    return Verdict.from_margin(margin)


def _require_pure_intermode(params):
    if params.eta0 != 0 or params.eta3 != 0:
        raise RegimeViolation("criterion requires eta0 = eta3 = 0 (inter-mode amplifier only)")


def _sinh_over(k, tp):
    # sinh(k tp)/k with the k -> 0 limit
    return math.sinh(k * tp) / k if k > 1e-12 else tp


def intermode_mn(params, tprime):
    """Scalars (M_a, M_b, N_c) of ``M = diag(M_a, M_b)``, ``N = N_c sigma1``."""
    _require_pure_intermode(params)
    g3p, e1p, k = params.gamma3p, params.eta1p, params.k
    decay = math.exp(-tprime)
    ch = math.cosh(k * tprime)
    sh_k = _sinh_over(k, tprime)
    m_a = decay * (ch - g3p * sh_k)
    m_b = decay * (ch + g3p * sh_k)
    n_c = -decay * e1p * sh_k
    return m_a, m_b, n_c


def strong_finite_time_state(params, tprime):
    """x-p symmetric state reached from vacuum after normalized time ``tprime``."""
    _require_pure_intermode(params)
    aa, ab, bc = intermode_blocks(params.gamma3p, params.eta1p, params.nbar0)
    m_a, m_b, n_c = intermode_mn(params, tprime)
    alpha_a = aa + m_a**2 * (0.5 - aa) + n_c**2 * (0.5 - ab) + 2 * m_a * n_c * bc
    alpha_b = ab + m_b**2 * (0.5 - ab) + n_c**2 * (0.5 - aa) + 2 * m_b * n_c * bc
    beta_c = bc - m_a * n_c * (0.5 - aa) - m_b * n_c * (0.5 - ab) - (m_a * m_b + n_c**2) * bc
    return XpSymmetricState(alpha_a, alpha_b, beta_c)


def strong_polynomial(gamma3p, eta1p, nbar0, tprime, alternate=False):
    """Finite-time separability polynomial in K1 = e^{(k-1)t'}, K2 = e^{-(k+1)t'}.

    Equals ``4 k**2 (k**2 - 1)`` times the x-p symmetric margin of the evolved
    state. ``alternate=True`` evaluates a variant whose eta1p**2 brace
    carries ``(4 nbar0**2 - 1)`` where ``-(4 nbar0**2 + 1)`` belongs.
    """
    g, e, n = gamma3p**2, eta1p**2, nbar0
    k = math.sqrt(g + e)
    k1 = math.exp((k - 1) * tprime)
    k2 = math.exp(-(k + 1) * tprime)
    # (K^2 - 1) via expm1 keeps the small-t' limit accurate
    k1m = math.expm1(2 * (k - 1) * tprime)
    k2m = math.expm1(-2 * (k + 1) * tprime)
    kkm = math.expm1(-2 * tprime)
    cross_factor = (4 * n * n - 1) if alternate else -(4 * n * n + 1)

    quartic = k1m * k2m - kkm**2 * (2 * n + 1) ** 2 * g
    quadratic = (
        kkm**2 * (1 - g) * g * cross_factor
        + 4 * n * n * k1m * k2m
        - 4 * n * g * (k2 * k2 - g - 2 * k1 * k2 * (1 - g) + k1 * k1 * (1 - k2 * k2 * g))
    )
    constant = -4 * n * n * k1m * k2m * (1 - g) * g
    return e * e * quartic - e * quadratic + constant


def strong_finite_time_criterion(params, tprime):
    """Finite-time criterion for a strong inter-mode amplifier (k > 1).

    The decision follows the polynomial; the direct state-path margin
    is reported alongside. Whenever the alternate polynomial has the other
    sign, the point is logged at INFO level with full parameters.
    """
    _require_pure_intermode(params)
    g3p, e1p, n = params.gamma3p, params.eta1p, params.nbar0
    _require_intermode(g3p, e1p, Regime.STRONG)
    margin = strong_polynomial(g3p, e1p, n, tprime)
    alternate = strong_polynomial(g3p, e1p, n, tprime, alternate=True)
    direct = ppt_xp_symmetric(strong_finite_time_state(params, tprime)).margin
    if abs(alternate) > MARGIN_BAND and abs(margin) > MARGIN_BAND and (alternate >= 0) != (margin >= 0):
        log.info(
            "alternate strong-amplifier polynomial disagrees in sign with the margin: "
            "gamma3p=%r eta1p=%r nbar0=%r tprime=%r alternate=%r margin=%r direct=%r",
            g3p, e1p, n, tprime, alternate, margin, direct,
        )
    base = Verdict.from_margin(margin)
    return StrongVerdict(base.decision, base.margin, float(alternate), float(direct))


def strong_asymptotic_criterion(gamma3p, eta1p, nbar0):
    """Long-time limit of the strong inter-mode criterion (k > 1)."""
    _require_intermode(gamma3p, eta1p, Regime.STRONG)
    g2 = gamma3p**2
    rhs = 2 * nbar0 * (nbar0 + g2 + math.sqrt(nbar0**2 + (2 * nbar0 + 1) * g2))
    return Verdict.from_margin(rhs - eta1p**2)


def symmetric_quartic_coeffs(eta0p, gamma3p, nbar0):
    """Coefficients (s0, s1, s2) of the quartic in eta1p for eta3 = 0."""
    e0, g, n = eta0p**2, gamma3p**2, nbar0
    nn1 = n * (n + 1)
    s0 = (1 - e0) ** 2 * (e0**2 + 8 * (1 + g) * e0 * nn1 + 16 * (1 - g) ** 2 * nn1**2)
    s2 = (1 - e0 - g * (2 * n + 1) ** 2) ** 2
    s1 = (
        -2 * e0**3
        - 8 * e0**2 * nn1
        - 2 * g * e0**2 * (8 * n * n + 8 * n + 1)
        - 4 * (1 - g) * (1 - g * (2 * n + 1) ** 2) * (2 * n * n + 2 * n + 1)
        + 2
        * e0
        * (
            8 * n * n + 8 * n + 3
            - 4 * g * g * nn1 * (2 * n + 1) ** 2
            + g * (16 * n**4 + 32 * n**3 + 24 * n * n + 8 * n - 1)
        )
    )
    return s0, s1, s2


def symmetric_quartic_criterion(params):
    """Asymptotic criterion with single-mode and inter-mode amplification."""
    if params.eta3 != 0:
        raise RegimeViolation("quartic criterion requires eta3 = 0")
    regime = classify_regime(params)
    if regime.symmetric is not Regime.WEAK:
        raise RegimeViolation(
            f"quartic criterion requires weak amplification C2 > B1 "
            f"(1 - eta0p > k), got eta0p = {params.eta0p:.12g}, k = {params.k:.12g}"
        )
    s0, s1, s2 = symmetric_quartic_coeffs(params.eta0p, params.gamma3p, params.nbar0)
    e = params.eta1p**2
    return Verdict.from_margin(s2 * e * e + s1 * e + s0)


def complex_to_real_cm(cm):
    """Real covariance matrix in (x1, p1, x2, p2) order with a = (x + ip)/sqrt(2)."""
    cm.check()
    x, y = cm.X, cm.Y
    v = np.empty((4, 4))
    for j in range(2):
        for k in range(2):
            v[2 * j, 2 * k] = (x[j, k] + y[j, k]).real
            v[2 * j + 1, 2 * k + 1] = (x[j, k] - y[j, k]).real
            v[2 * j, 2 * k + 1] = (x[j, k] + y[j, k]).imag
            v[2 * j + 1, 2 * k] = (y[j, k] - x[j, k]).imag
    return v


OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(v):
    """Symplectic spectrum (nu1 >= nu2) of a 4x4 real covariance matrix."""
    v = np.asarray(v, dtype=float)
    if np.max(np.abs(v - v.T)) > 1e-10 * max(1.0, float(np.max(np.abs(v)))):
        raise ValueError("covariance matrix is not symmetric")
    ev = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ v)))[::-1]
    # eigenvalues come in +/- pairs
    return float((ev[0] + ev[1]) / 2), float((ev[2] + ev[3]) / 2)


def is_physical(cm, tol=1e-9):
    """Uncertainty relation ``V + i Omega / 2 >= 0`` on the real covariance matrix."""
    v = complex_to_real_cm(cm)
    return bool(np.linalg.eigvalsh(v + 0.5j * OMEGA).min() >= -tol)
