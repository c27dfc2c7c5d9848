"""Small fixed-size complex matrix algebra (2x2 and 4x4).

Matrices are plain ``numpy`` complex arrays. Two-qubit index convention:
basis state |i1 i2> sits at row ``2*i1 + i2``; qubit A is the left factor.
"""

from typing import NamedTuple

import numpy as np

from .errors import NotHermitian

HERMITIAN_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

SYSTEM_A = "A"
SYSTEM_B = "B"


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns


def as_matrix(m, dim=None) -> np.ndarray:
    """Coerce to a finite complex square matrix of size 2 or 4."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, 2), as_matrix(b, 2))


def hermiticity_error(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - dagger(m))))


def herm_eig(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitian when ``max|m - m^dagger|`` exceeds 1e-10. The input is
    symmetrized before diagonalization so round-off asymmetry never leaks
    into the result.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian: max|m - m^dagger| = {err:.3e}")
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    return HermitianEigen(w, v)


def expm_i(h, t: float) -> np.ndarray:
    """Propagator exp(-i h t) for Hermitian ``h``."""
    w, v = herm_eig(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def partial_trace(m, keep: str = SYSTEM_A) -> np.ndarray:
    """Reduce a two-qubit operator to the qubit named by ``keep``."""
    t = as_matrix(m, 4).reshape(2, 2, 2, 2)  # (a, b, a', b')
    if keep == SYSTEM_A:
        return np.einsum("ijkj->ik", t)
    if keep == SYSTEM_B:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def purity(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.real(np.trace(m @ m)))


def matrix_sqrt_psd(m) -> np.ndarray:
    """Square root of a Hermitian PSD matrix; negative round-off clamped to 0."""
    w, v = herm_eig(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)
