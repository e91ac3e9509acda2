"""Independent numerical checks of the closed forms.

Nothing here calls the Pauli-basis exponentials or the closed-form
propagator: the M/N equations are integrated with classical RK4, the
stationary pair is checked by substituting it back into its defining matrix
equations, and the Peres-Horodecki test is redone on the real covariance
matrix via partial transposition.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, Regime, classify_regime
from .errors import RegimeViolation
from .propagator import Propagator, residue_eta3_zero, residue_general
from .separability import (
    MARGIN_BAND,
    OMEGA,
    ppt_general,
    strong_asymptotic_criterion,
    strong_finite_time_criterion,
    symmetric_quartic_criterion,
    weak_intermode_criterion,
)


def rk4_mn(eta, gamma, t, steps):
    """Classical RK4 for dM/dt = -eta N - (Gamma/2) M, dN/dt = -eta M - (Gamma/2) N.

    Broadcasts over leading axes, so ``eta`` and ``gamma`` may be stacks of
    2x2 matrices and ``t`` a matching array of end times; every system takes
    ``steps`` equal steps.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    eta = np.asarray(eta, dtype=float)
    half_gamma = np.asarray(gamma, dtype=float) / 2
    t = np.asarray(t, dtype=float)
    h = (t / steps)[..., None, None]
    m = np.broadcast_to(np.eye(2), eta.shape).copy()
    n = np.zeros_like(m)

    def rhs(m, n):
        return -eta @ n - half_gamma @ m, -eta @ m - half_gamma @ n

    for _ in range(steps):
        k1m, k1n = rhs(m, n)
        k2m, k2n = rhs(m + h / 2 * k1m, n + h / 2 * k1n)
        k3m, k3n = rhs(m + h / 2 * k2m, n + h / 2 * k2n)
        k4m, k4n = rhs(m + h * k3m, n + h * k3n)
        m = m + h / 6 * (k1m + 2 * k2m + 2 * k3m + k4m)
        n = n + h / 6 * (k1n + 2 * k2n + 2 * k3n + k4n)
    return m, n


def integrate_mn_ode(params, t, steps):
    if t < 0:
        raise ValueError("t must be non-negative")
    m, n = rk4_mn(params.eta_matrix(), params.gamma_matrix(), t, steps)
    return Propagator(m, n, t)


def residual_alpha_beta(params, pair):
    """Max-norm residuals of the two stationary matrix equations."""
    eta = params.eta_matrix()
    gam = params.gamma_matrix()
    noise = (params.nbar0 + 0.5) * np.eye(2)
    a, b = pair.alpha, pair.beta
    r1 = 2 * (eta @ a + a.conj() @ eta) - gam @ b - b @ gam
    r2 = gam @ a + a @ gam - 2 * eta @ b - 2 * b.conj() @ eta - gam @ noise - noise @ gam
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


def simon_margin(v):
    """Simon's separability invariant on a real 4x4 covariance matrix."""
    a, b, c = v[:2, :2], v[2:, 2:], v[:2, 2:]
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    det_a, det_b, det_c = np.linalg.det(a), np.linalg.det(b), np.linalg.det(c)
    lhs = det_a * det_b + (0.25 - abs(det_c)) ** 2 - np.trace(a @ j @ c @ j @ b @ j @ c.T @ j)
    return float(lhs - 0.25 * (det_a + det_b))


def partial_transpose_margin(v):
    """Smallest symplectic eigenvalue of the partially transposed CM, minus 1/2."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    vt = flip @ v @ flip
    ev = np.abs(np.linalg.eigvals(1j * OMEGA @ vt))
    return float(np.min(ev) - 0.5)


# ---------------------------------------------------------------------------
# criterion equivalence


PAIRS = ("weak", "quartic", "strong-finite", "strong-asymptotic")


@dataclass
class EquivalenceReport:
    pair: str
    agree: int = 0
    disagree: int = 0
    within_band: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def total(self):
        return self.agree + self.disagree + self.within_band

    @property
    def ok(self):
        return self.disagree == 0

    def as_dict(self):
        return {
            "pair": self.pair,
            "agree": self.agree,
            "disagree": self.disagree,
            "within_band": self.within_band,
            "disagreements": self.disagreements,
        }


def _weak_pair(p):
    params = ChannelParams.normalized(eta1p=p["eta1p"], gamma3p=p["gamma3p"], nbar0=p["nbar0"])
    if classify_regime(params).intermode is not Regime.WEAK:
        raise RegimeViolation(f"point {p} is not in the weak inter-mode regime")
    crit = weak_intermode_criterion(p["gamma3p"], p["eta1p"], p["nbar0"]).margin
    state = ppt_general(residue_general(params).cm()).margin
    return crit, state


def _quartic_pair(p):
    params = ChannelParams.normalized(
        eta1p=p["eta1p"], gamma3p=p["gamma3p"], nbar0=p["nbar0"], eta0p=p["eta0p"]
    )
    crit = symmetric_quartic_criterion(params).margin
    state = ppt_general(residue_eta3_zero(params).cm()).margin
    return crit, state


def _strong_finite_pair(p, alternate=False):
    params = ChannelParams.normalized(eta1p=p["eta1p"], gamma3p=p["gamma3p"], nbar0=p["nbar0"])
    v = strong_finite_time_criterion(params, p["tprime"])
    return (v.alternate_margin if alternate else v.margin), v.direct_margin


def _strong_asymptotic_pair(p):
    params = ChannelParams.normalized(eta1p=p["eta1p"], gamma3p=p["gamma3p"], nbar0=p["nbar0"])
    crit = strong_asymptotic_criterion(p["gamma3p"], p["eta1p"], p["nbar0"]).margin
    finite = strong_finite_time_criterion(params, p.get("tprime", 30.0)).margin
    return crit, finite


_EVALUATORS = {
    "weak": _weak_pair,
    "quartic": _quartic_pair,
    "strong-finite": _strong_finite_pair,
    "strong-finite-alternate": lambda p: _strong_finite_pair(p, alternate=True),
    "strong-asymptotic": _strong_asymptotic_pair,
}


def criterion_equivalence_report(pair, points, band=MARGIN_BAND):
    """Compare the signs of two routes to the same separability decision.

    Args:
        pair (str): one of ``weak`` (closed-form inequality vs. PPT on the
            stationary state), ``quartic``, ``strong-finite`` (K1/K2 polynomial
            vs. evolved state), ``strong-finite-alternate`` (the variant
            polynomial vs. evolved state) or ``strong-asymptotic`` (long-time
            limit vs. the finite-time criterion at ``tprime`` = 30)
        points (iterable of dict): grid points with keys ``gamma3p``,
            ``eta1p``, ``nbar0`` and, where relevant, ``eta0p``, ``tprime``
        band (float): points with either |margin| <= band are only counted

    Raises:
        RegimeViolation: a grid point lies outside the pair's regime
    """
    evaluate = _EVALUATORS[pair]
    report = EquivalenceReport(pair)
    for p in points:
        a, b = evaluate(p)
        if abs(a) <= band or abs(b) <= band:
            report.within_band += 1
        elif (a >= 0) == (b >= 0):
            report.agree += 1
        else:
            report.disagree += 1
            report.disagreements.append({**p, "margin_a": a, "margin_b": b})
    return report


def _fractions(count):
    # open interval (0, 1), endpoints excluded
    return [j / (count + 1) for j in range(1, count + 1)]


def weak_grid(gamma3p=None, nbar0=None, eta1p_count=20):
    """Points strictly inside k < 1; eta1p spans (0, sqrt(1 - gamma3p**2))."""
    gamma3p = gamma3p if gamma3p is not None else [0.05 * i for i in range(19)]
    nbar0 = nbar0 if nbar0 is not None else [0.05 * i for i in range(21)]
    points = []
    for g in gamma3p:
        limit = math.sqrt(1 - g * g)
        for n in nbar0:
            for f in _fractions(eta1p_count):
                points.append({"gamma3p": g, "nbar0": n, "eta1p": f * limit})
    return points


def quartic_grid(eta0p, gamma3p=None, nbar0=None, eta1p_count=20):
    """Points with eta3 = 0 strictly inside the weak symmetric regime 1 - eta0p > k."""
    gamma3p = gamma3p if gamma3p is not None else [0.05 * i for i in range(19)]
    nbar0 = nbar0 if nbar0 is not None else [0.05 * i for i in range(21)]
    points = []
    for g in gamma3p:
        reach = (1 - eta0p) ** 2 - g * g
        if reach <= 0:
            continue
        limit = math.sqrt(reach)
        for n in nbar0:
            for f in _fractions(eta1p_count):
                points.append({"eta0p": eta0p, "gamma3p": g, "nbar0": n, "eta1p": f * limit})
    return points


def strong_grid(k_values, gamma3p=None, nbar0=None, tprime=(30.0,)):
    """Points in k > 1, parameterized by k so every point is in-regime."""
    gamma3p = gamma3p if gamma3p is not None else [0.05 * i for i in range(19)]
    nbar0 = nbar0 if nbar0 is not None else [0.05 * i for i in range(21)]
    points = []
    for k in k_values:
        for g in gamma3p:
            for n in nbar0:
                for tp in tprime:
                    points.append(
                        {"gamma3p": g, "nbar0": n, "eta1p": math.sqrt(k * k - g * g), "tprime": tp}
                    )
    return points
