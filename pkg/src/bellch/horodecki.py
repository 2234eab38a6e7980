"""Exact maximal Bell-CH/CHSH values for two-qubit states.

CHSH_max = 2 sqrt(M) with M the sum of the two largest eigenvalues of
T^T T, where T is the Pauli correlation matrix; CH_max = CHSH_max/4 - 1/2.
"""

from math import sqrt

import numpy as np

from .linalg import eig_hermitian, kron
from .states import BipartiteDensity

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


# stacked sigma_i (x) sigma_j, transposed so tr(rho K) is one dot product each
_PAULI_KRON_T = np.stack([kron(si, sj).T for si in PAULI for sj in PAULI])


def correlation_matrix(rho: BipartiteDensity) -> np.ndarray:
    """t[i, j] = tr(rho sigma_i (x) sigma_j), real 3x3."""
    if (rho.dA, rho.dB) != (2, 2):
        raise ValueError("correlation matrix requires a 2x2 system")
    t = (_PAULI_KRON_T.reshape(9, 16) @ rho.rho.ravel()).real
    return t.reshape(3, 3)


def max_ch(rho: BipartiteDensity) -> float:
    """Exact maximal Bell-CH value; the state violates CH iff this is > 0."""
    t = correlation_matrix(rho)
    w, _ = eig_hermitian(t.T @ t)
    chsh = 2.0 * sqrt(w[0] + w[1])
    return chsh / 4.0 - 0.5


def werner_threshold() -> float:
    """Singlet fidelity above which Werner states violate Bell-CH."""
    return (3.0 / sqrt(2.0) + 1.0) / 4.0
