"""2x2 matrix algebra in the Pauli basis.

Matrices are plain ``(2, 2)`` complex numpy arrays. The closed-form
exponential ``pauli_exp`` is what the propagator uses; ``mat_exp_oracle`` is a
generic scaling-and-squaring series kept deliberately independent of it.
"""

from math import factorial
from typing import NamedTuple

import numpy as np

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMAS = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)

# |v| below this uses the sinh(|v|t)/|v| -> t limit
_ZERO_NORM = 1e-12


class PauliCoeffs(NamedTuple):
    c0: complex
    c1: complex
    c2: complex
    c3: complex


def decompose(a):
    """Coefficients of ``a`` over (sigma0, sigma1, sigma2, sigma3)."""
    a = np.asarray(a, dtype=complex)
    return PauliCoeffs(
        (a[0, 0] + a[1, 1]) / 2,
        (a[0, 1] + a[1, 0]) / 2,
        1j * (a[0, 1] - a[1, 0]) / 2,
        (a[0, 0] - a[1, 1]) / 2,
    )


def compose(c):
    """Inverse of :func:`decompose`."""
    c0, c1, c2, c3 = c
    return np.array([[c0 + c3, c1 - 1j * c2], [c1 + 1j * c2, c0 - c3]], dtype=complex)


def pauli_exp(a0, v, t):
    r"""Closed form of ``exp(-(a0*sigma0 + v . sigma) t)`` for real ``a0``, ``v``.

    Uses :math:`e^{-a_0 t}[\cosh(|v|t)\sigma_0 - \sinh(|v|t)\hat v\cdot\sigma]`.

    Args:
        a0 (float): coefficient of the identity
        v (sequence of 3 floats): coefficients of (sigma1, sigma2, sigma3)
        t (float): time

    Returns:
        array: the 2x2 complex exponential
    """
    v = np.asarray(v, dtype=float)
    norm = float(np.sqrt(v @ v))
    vs = v[0] * SIGMA1 + v[1] * SIGMA2 + v[2] * SIGMA3
    if norm < _ZERO_NORM:
        # sinh(|v|t)/|v| -> t; keeps first order in v exact
        return np.exp(-a0 * t) * (SIGMA0 - t * vs)
    return np.exp(-a0 * t) * (np.cosh(norm * t) * SIGMA0 - (np.sinh(norm * t) / norm) * vs)


def mat_exp_oracle(a, tol=1e-17):
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 1/2, the
    series is summed until the tail bound falls below ``tol``, and the result
    is squared ``s`` times. Works for any square matrix but is only used on
    2x2 inputs as an independent check of :func:`pauli_exp`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 1)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    b = a / 2.0**s
    bnorm = norm / 2.0**s

    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    m = 0
    while True:
        m += 1
        term = term @ b / m
        result = result + term
        # geometric bound on the tail sum_{j>m} |b|^j / j!
        tail = bnorm ** (m + 1) / factorial(m + 1) / (1 - bnorm / (m + 2))
        if tail < tol or not np.any(term):
            break
    for _ in range(s):
        result = result @ result
    return result
