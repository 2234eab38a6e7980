"""Dense complex matrix kernel used by every physics module.

All functions take and return plain ``numpy`` arrays (complex128).
Matrices stay small (a few hundred rows at most), so robustness and
simplicity win over any clever sparse/structured handling.
"""

from typing import NamedTuple

import numpy as np

# Relative threshold separating "numerically zero" eigenvalues from
# genuinely positive ones when building POVM elements.
DEFAULT_TAU_REL = 1e-9

HERMITICITY_TOL = 1e-12


class EigDecomposition(NamedTuple):
    values: np.ndarray   # real, sorted descending
    vectors: np.ndarray  # orthonormal columns, vectors[:, i] <-> values[i]


def kron(a, b):
    """Kronecker product, (i*rb+k, j*cb+l) -> a[i,j]*b[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def eig_hermitian(h) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized as (h + h†)/2 before the solve; inputs that
    deviate from Hermiticity by more than ``HERMITICITY_TOL`` (relative to
    the Frobenius norm) are rejected.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, np.linalg.norm(h))
    if np.linalg.norm(h - h.conj().T) > HERMITICITY_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    hs = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(hs)
    return EigDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def positive_part_projector(h, tau=None):
    """Projector onto the span of eigenvectors of h with eigenvalue > tau.

    ``tau`` defaults to ``DEFAULT_TAU_REL`` times the spectral radius, which
    keeps numerically-zero eigenvalues out of the returned projector.
    """
    w, v = eig_hermitian(h)
    if tau is None:
        radius = max(abs(w[0]), abs(w[-1]))
        tau = DEFAULT_TAU_REL * radius
    cols = v[:, w > tau]
    return cols @ cols.conj().T


def partial_trace(m, dA, dB, keep="A"):
    """Trace out one party of a (dA*dB)x(dA*dB) matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (dA * dB, dA * dB):
        raise ValueError(f"matrix shape {m.shape} does not match dims ({dA},{dB})")
    m4 = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ibjb->ij", m4)
    if keep == "B":
        return np.einsum("aiaj->ij", m4)
    raise ValueError("keep must be 'A' or 'B'")
