"""Channel parameters, Gaussian state records and regime classification.

Rates are kept raw (``eta0, eta1, eta3, gamma1, gamma2``); the normalized
quantities every criterion is written in are derived properties:

    gamma0 = (gamma1 + gamma2)/2        gamma3 = (gamma1 - gamma2)/2
    eta0p  = 2 eta0 / gamma0            eta1p  = 2 eta1 / gamma0
    gamma3p = gamma3 / gamma0           k = sqrt(gamma3p**2 + eta1p**2)
    tprime = gamma0 t / 2
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedCM, NegativeNoise, NonFinite, NonPositiveGamma0, ValidationError
from .pauli import SIGMA0, SIGMA1, SIGMA3

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    eta0: float = 0.0
    eta1: float = 0.0
    eta3: float = 0.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    nbar0: float = 0.0

    @classmethod
    def normalized(cls, eta1p=0.0, gamma3p=0.0, nbar0=0.0, eta0p=0.0, eta3p=0.0):
        """Build parameters in units where gamma0 = 1."""
        return cls(
            eta0=eta0p / 2,
            eta1=eta1p / 2,
            eta3=eta3p / 2,
            gamma1=1.0 + gamma3p,
            gamma2=1.0 - gamma3p,
            nbar0=nbar0,
        )

    @property
    def gamma0(self):
        return (self.gamma1 + self.gamma2) / 2

    @property
    def gamma3(self):
        return (self.gamma1 - self.gamma2) / 2

    @property
    def eta0p(self):
        return 2 * self.eta0 / self.gamma0

    @property
    def eta1p(self):
        return 2 * self.eta1 / self.gamma0

    @property
    def eta3p(self):
        return 2 * self.eta3 / self.gamma0

    @property
    def gamma3p(self):
        return self.gamma3 / self.gamma0

    @property
    def nbar0p(self):
        return self.nbar0 + 0.5

    @property
    def k(self):
        return math.hypot(self.gamma3p, self.eta1p)

    def tprime(self, t):
        return self.gamma0 * t / 2

    def time(self, tprime):
        """Inverse of :meth:`tprime`."""
        return 2 * tprime / self.gamma0

    def eta_matrix(self):
        return (self.eta0 * SIGMA0 + self.eta1 * SIGMA1 + self.eta3 * SIGMA3).real

    def gamma_matrix(self):
        return np.diag([self.gamma1, self.gamma2])

    def as_dict(self):
        return {
            "eta0": self.eta0,
            "eta1": self.eta1,
            "eta3": self.eta3,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "nbar0": self.nbar0,
        }


def validate(params):
    """Check ``params`` and return it unchanged.

    Raises:
        NonFinite: any field is NaN or infinite
        NonPositiveGamma0: gamma1 + gamma2 <= 0
        NegativeNoise: nbar0 < 0
        ValidationError: a negative damping rate
    """
    for name, value in params.as_dict().items():
        if not math.isfinite(value):
            raise NonFinite(f"{name} must be finite, got {value!r}", field=name)
    if params.gamma0 <= 0:
        raise NonPositiveGamma0(
            f"gamma0 = (gamma1 + gamma2)/2 must be positive, got {params.gamma0!r}",
            field="gamma1",
        )
    for name in ("gamma1", "gamma2"):
        if getattr(params, name) < 0:
            raise ValidationError(f"{name} must be non-negative", field=name)
    if params.nbar0 < 0:
        raise NegativeNoise(f"nbar0 must be non-negative, got {params.nbar0!r}", field="nbar0")
    return params


class Regime(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class RegimeClass:
    intermode: Regime
    symmetric: Regime

    def as_dict(self):
        return {"intermode": self.intermode.value, "symmetric": self.symmetric.value}


def drift_rates(params):
    """The (C1, C2, B1, B2) decay/growth rates of the two exponentials."""
    g0, g3 = params.gamma0, params.gamma3
    c1 = params.eta0 + g0 / 2
    c2 = -params.eta0 + g0 / 2
    b1 = math.hypot(params.eta1, g3 / 2 + params.eta3)
    b2 = math.hypot(params.eta1, g3 / 2 - params.eta3)
    return c1, c2, b1, b2


def has_stationary_limit(params):
    """True when both exponentials decay, so gamma(t) tends to the residue state."""
    c1, c2, b1, b2 = drift_rates(params)
    return c1 > b1 and c2 > b2


def classify_regime(params):
    # k = 1 is the same surface as gamma3**2 + 4 eta1**2 = gamma0**2
    k = params.k
    if abs(k - 1) < BOUNDARY_TOL:
        intermode = Regime.BOUNDARY
    else:
        intermode = Regime.WEAK if k < 1 else Regime.STRONG

    _, c2, b1, _ = drift_rates(params)
    gap = c2 - b1
    if abs(gap) < BOUNDARY_TOL * params.gamma0:
        symmetric = Regime.BOUNDARY
    else:
        symmetric = Regime.WEAK if gap > 0 else Regime.STRONG
    return RegimeClass(intermode, symmetric)


def _hermitian_gap(x):
    return float(np.max(np.abs(x - x.conj().T)))


def _symmetric_gap(y):
    return float(np.max(np.abs(y - y.T)))


@dataclass(frozen=True, eq=False)
class ComplexCM:
    """Complex correlation matrix ``[[X, Y*], [Y, X*]]``.

    ``X[j, k] = <{a_j^dag, a_k}>/2`` and ``Y[j, k] = <a_j a_k>`` (zero-mean part),
    so the vacuum is ``X = I/2, Y = 0``.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.array(self.X, dtype=complex).reshape(2, 2))
        object.__setattr__(self, "Y", np.array(self.Y, dtype=complex).reshape(2, 2))

    @classmethod
    def vacuum(cls):
        return cls(0.5 * np.eye(2), np.zeros((2, 2)))

    @classmethod
    def thermal(cls, nbar):
        return cls((nbar + 0.5) * np.eye(2), np.zeros((2, 2)))

    @classmethod
    def xp_symmetric(cls, alpha_a, alpha_b, beta_c):
        return cls(np.diag([alpha_a, alpha_b]), beta_c * np.array([[0, 1], [1, 0]]))

    @classmethod
    def from_full(cls, gamma):
        gamma = np.asarray(gamma, dtype=complex)
        return cls(gamma[:2, :2], gamma[2:, :2])

    def full(self):
        return np.block([[self.X, self.Y.conj()], [self.Y, self.X.conj()]])

    def block_errors(self):
        return _hermitian_gap(self.X), _symmetric_gap(self.Y)

    def check(self, tol=1e-9):
        """Raise :class:`MalformedCM` if X is not hermitian or Y not symmetric."""
        scale = max(1.0, float(np.max(np.abs(self.X))), float(np.max(np.abs(self.Y))))
        herm, sym = self.block_errors()
        if herm > tol * scale:
            raise MalformedCM(f"X block is not hermitian (gap {herm:.3e})", field="X")
        if sym > tol * scale:
            raise MalformedCM(f"Y block is not symmetric (gap {sym:.3e})", field="Y")
        return self

    def allclose(self, other, atol):
        return bool(
            np.max(np.abs(self.X - other.X)) <= atol and np.max(np.abs(self.Y - other.Y)) <= atol
        )


@dataclass(frozen=True, eq=False)
class GaussianState:
    cm: ComplexCM
    m: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=complex))

    def __post_init__(self):
        object.__setattr__(self, "m", np.array(self.m, dtype=complex).reshape(2))

    @classmethod
    def vacuum(cls):
        return cls(ComplexCM.vacuum())

    @classmethod
    def thermal(cls, nbar):
        return cls(ComplexCM.thermal(nbar))
