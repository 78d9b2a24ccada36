"""
Hermitian eigen-decomposition with an explicit Hermiticity contract.
"""

from typing import Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

import src.utils.config as config


def _check_hermitian(matrix: NDArray[np.complex128], tol: float) -> NDArray[np.complex128]:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {m.shape}")
    deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if deviation > tol:
        raise ValueError(f"Matrix is not Hermitian (max deviation {deviation:.3e} > {tol:.1e})")
    return m


def hermitian_eigenvalues(matrix: NDArray[np.complex128], tol: float = config.HERMITIAN_TOL) -> NDArray[np.float64]:
    """
    Eigenvalues of a Hermitian matrix in ascending order.

    Args:
        matrix: Square matrix, Hermitian within ``tol``
        tol: Largest accepted elementwise deviation from Hermiticity

    Returns:
        NDArray[np.float64]: Real eigenvalues, ascending
    """
    m = _check_hermitian(matrix, tol)
    return linalg.eigvalsh(m, check_finite=True)


def hermitian_eigensystem(
    matrix: NDArray[np.complex128], tol: float = config.HERMITIAN_TOL
) -> Tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors as columns.

    ``vecs @ diag(vals) @ vecs.conj().T`` reconstructs the input.
    """
    m = _check_hermitian(matrix, tol)
    return linalg.eigh(m, check_finite=True)
