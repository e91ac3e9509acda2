"""Separability borders by bisection on the long-time criteria.

For each (gamma3p, eta1p, eta0p) cell the critical thermal occupancy is the
noise level above which the long-time state is separable. The criterion is
chosen by regime: the weak inequality or the strong long-time limit when
eta0p = 0, the quartic when eta0p != 0 (weak symmetric regime only).
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, Regime, RegimeClass, classify_regime
from .errors import NoSignChange, RegimeViolation
from .separability import (
    strong_asymptotic_criterion,
    symmetric_quartic_criterion,
    weak_intermode_criterion,
)

DEFAULT_NBAR_MAX = 5.0
DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class BorderPoint:
    gamma3p: float
    eta1p: float
    eta0p: float
    critical_value: float
    regime: RegimeClass
    which_variable: str = "nbar0"
    status: str = "ok"

    @property
    def governing_regime(self):
        return self.regime.intermode if self.eta0p == 0 else self.regime.symmetric


def _params(gamma3p, eta1p, eta0p, nbar0=0.0):
    return ChannelParams.normalized(eta1p=eta1p, gamma3p=gamma3p, nbar0=nbar0, eta0p=eta0p)


def margin_function(gamma3p, eta1p, eta0p=0.0):
    """Return ``(regime, f)`` with ``f(nbar0)`` the governing long-time margin.

    Raises:
        RegimeViolation: on the regime boundary, or for eta0p != 0 outside the
            weak symmetric regime where no long-time criterion is available
    """
    regime = classify_regime(_params(gamma3p, eta1p, eta0p))
    if eta0p == 0:
        if regime.intermode is Regime.WEAK:
            return regime, lambda n: weak_intermode_criterion(gamma3p, eta1p, n).margin
        if regime.intermode is Regime.STRONG:
            return regime, lambda n: strong_asymptotic_criterion(gamma3p, eta1p, n).margin
        raise RegimeViolation(f"k = 1 boundary at gamma3p={gamma3p!r}, eta1p={eta1p!r}")
    if regime.symmetric is not Regime.WEAK:
        raise RegimeViolation(
            f"no long-time criterion outside weak symmetric amplification "
            f"(gamma3p={gamma3p!r}, eta1p={eta1p!r}, eta0p={eta0p!r})"
        )
    return regime, lambda n: symmetric_quartic_criterion(
        _params(gamma3p, eta1p, eta0p, n)
    ).margin


def bisect_root(f, lo, hi, tol):
    """Bisection on ``[lo, hi]`` with ``f(lo) < 0 <= f(hi)``; returns the upper end."""
    flo, fhi = f(lo), f(hi)
    if not (flo < 0 <= fhi):
        raise NoSignChange(f"margin does not go from negative to non-negative on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return hi


def critical_noise(gamma3p, eta1p, eta0p=0.0, nbar_max=DEFAULT_NBAR_MAX, tol=DEFAULT_TOL):
    """Critical thermal occupancy: entangled below, separable at and above.

    Raises:
        NoSignChange: the whole interval ``[0, nbar_max]`` is one phase
        RegimeViolation: see :func:`margin_function`
    """
    regime, f = margin_function(gamma3p, eta1p, eta0p)
    value = bisect_root(f, 0.0, nbar_max, tol)
    return BorderPoint(gamma3p, eta1p, eta0p, value, regime)


@dataclass(frozen=True)
class GridSpec:
    gamma3p: tuple
    eta1p: tuple
    eta0p: tuple = (0.0,)
    nbar_max: float = DEFAULT_NBAR_MAX
    tol: float = DEFAULT_TOL

    @classmethod
    def from_ranges(cls, gamma3p, eta1p, eta0p=(0.0, 0.0, 1.0), **kw):
        """Build a grid from ``(start, stop, step)`` triples, stop inclusive."""
        return cls(axis(*gamma3p), axis(*eta1p), axis(*eta0p), **kw)

    @property
    def size(self):
        return len(self.gamma3p) * len(self.eta1p) * len(self.eta0p)


def axis(start, stop, step):
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("stop must not be below start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding keeps 0.05*i on the decimal grid the user asked for
    return tuple(float(round(start + i * step, 12)) for i in range(count))


INTERMODE_GRID = GridSpec(axis(0.0, 0.9, 0.05), axis(0.05, 2.0, 0.05), (0.0,))
SYMMETRIC_GRID = GridSpec(axis(0.0, 0.5, 0.025), axis(0.025, 0.5, 0.025), (0.5,))


def _cell(gamma3p, eta1p, eta0p, nbar_max, tol):
    regime = classify_regime(_params(gamma3p, eta1p, eta0p))
    try:
        return critical_noise(gamma3p, eta1p, eta0p, nbar_max, tol)
    except NoSignChange:
        status = "no-sign-change"
    except RegimeViolation:
        status = "boundary" if Regime.BOUNDARY in (regime.intermode, regime.symmetric) else "out-of-regime"
    return BorderPoint(gamma3p, eta1p, eta0p, math.nan, regime, status=status)


def thread_count():
    """Worker cap from GAUSSAMP_THREADS (0 or unset: one per CPU)."""
    raw = os.environ.get("GAUSSAMP_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("GAUSSAMP_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def sweep_grid(spec, threads=None):
    """One :class:`BorderPoint` per cell, row-major over (eta0p, gamma3p, eta1p).

    Failures are recorded in ``status``; the sweep never aborts on a cell.
    """
    cells = [(g, e1, e0) for e0 in spec.eta0p for g in spec.gamma3p for e1 in spec.eta1p]
    threads = thread_count() if threads is None else threads
    run = lambda c: _cell(c[0], c[1], c[2], spec.nbar_max, spec.tol)  # noqa: E731
    if threads <= 1 or len(cells) < 64:
        return [run(c) for c in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves input order
        return list(pool.map(run, cells))


def entangled_cells(points, nbar0):
    """Number of cells whose long-time state at ``nbar0`` is entangled."""
    return int(sum(1 for p in points if p.status == "ok" and nbar0 < p.critical_value))


def border_matrix(points, spec, eta0p=None):
    """Critical values as a ``(len(gamma3p), len(eta1p))`` array for one eta0p slice."""
    eta0p = spec.eta0p[0] if eta0p is None else eta0p
    rows = [p.critical_value for p in points if p.eta0p == eta0p]
    return np.array(rows, dtype=float).reshape(len(spec.gamma3p), len(spec.eta1p))
