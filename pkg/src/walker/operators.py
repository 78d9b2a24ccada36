"""
Position-space operators as sparse matrices in the joint (position, coin) basis.

These are the literal operator definitions; the channels apply the same maps
structurally on the density-matrix tensor and are tested against them.
"""

from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.walker.states import CoinConvention, PositionWindow, WalkerDensityMatrix


def site_shift(window: PositionWindow, step: int) -> sparse.csr_matrix:
    """Shift |x> -> |x + step> on the position space, truncated at the window edge."""
    return sparse.eye(window.n_sites, k=-step, dtype=np.complex128, format="csr")


def conditional_shift(window: PositionWindow) -> sparse.csr_matrix:
    """S = sum_x |x+1><x| (x) |R><R| + |x-1><x| (x) |L><L|."""
    terms = [
        sparse.kron(site_shift(window, shift), CoinConvention.PROJECTORS[c])
        for c, shift in enumerate(CoinConvention.SHIFTS)
    ]
    return sparse.csr_matrix(terms[0] + terms[1])


def coin_operator(window: PositionWindow, coin: NDArray[np.complex128]) -> sparse.csr_matrix:
    """I_position (x) coin."""
    return sparse.csr_matrix(sparse.kron(sparse.eye(window.n_sites, dtype=np.complex128), coin))


def walk_unitary(window: PositionWindow) -> sparse.csr_matrix:
    """One Hadamard-walk step U_w = S (I (x) H)."""
    return sparse.csr_matrix(conditional_shift(window) @ coin_operator(window, CoinConvention.HADAMARD))


def tunnel_shift(window: PositionWindow, step: int) -> sparse.csr_matrix:
    """Coin-independent hop S_(+/-) = shift (x) I_coin."""
    return sparse.csr_matrix(sparse.kron(site_shift(window, step), np.eye(2, dtype=np.complex128)))


def apply_kraus_dense(rho: WalkerDensityMatrix, operators: Sequence[sparse.spmatrix]) -> WalkerDensityMatrix:
    """
    Reference channel application rho -> sum_n E_n rho E_n^dagger.

    Args:
        rho: Input state
        operators: Kraus operators on the same window

    Returns:
        WalkerDensityMatrix: Output state
    """
    out = np.zeros_like(rho.matrix)
    for op in operators:
        left = op @ rho.matrix
        out += (op @ left.conj().T).conj().T
    return WalkerDensityMatrix(out, rho.window)
