"""Two-mode Gaussian states under non-symmetric damping and parametric amplification."""

__version__ = "0.1.0"

from .channel import ChannelParams, ComplexCM, GaussianState, Regime, classify_regime, validate
from .errors import (
    GaussAmpError,
    MalformedCM,
    NegativeNoise,
    NonFinite,
    NonPositiveGamma0,
    NoSignChange,
    RegimeViolation,
    SingularSystem,
    ValidationError,
)
from .propagator import compute_mn, evolve, residue_general
from .separability import ppt_general
from .sweep import critical_noise, sweep_grid

__all__ = [
    "ChannelParams",
    "ComplexCM",
    "GaussianState",
    "Regime",
    "classify_regime",
    "validate",
    "GaussAmpError",
    "MalformedCM",
    "NegativeNoise",
    "NonFinite",
    "NonPositiveGamma0",
    "NoSignChange",
    "RegimeViolation",
    "SingularSystem",
    "ValidationError",
    "compute_mn",
    "evolve",
    "residue_general",
    "ppt_general",
    "critical_noise",
    "sweep_grid",
]
