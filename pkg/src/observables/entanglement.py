"""
Partial transposes and coin-position negativity.
"""

import numpy as np
from numpy.typing import NDArray

import src.utils.config as config
from src.utils.errors import NumericalInvariantError
from src.observables.linalg import hermitian_eigenvalues
from src.walker.states import WalkerDensityMatrix

PARTIAL_TRANSPOSE_AXES = {
    # <x,c| rho^T_coin |y,b> = <x,b| rho |y,c>
    "coin": (0, 3, 2, 1),
    # <x,c| rho^T_pos |y,b> = <y,c| rho |x,b>
    "position": (2, 1, 0, 3),
}


def _transpose(tensor: NDArray[np.complex128], subsystem: str) -> NDArray[np.complex128]:
    dim = 2 * tensor.shape[0]
    return np.ascontiguousarray(tensor.transpose(PARTIAL_TRANSPOSE_AXES[subsystem])).reshape(dim, dim)


def partial_transpose_coin(rho: WalkerDensityMatrix) -> NDArray[np.complex128]:
    """Transpose over the coin indices only."""
    return _transpose(rho.tensor, "coin")


def partial_transpose_position(rho: WalkerDensityMatrix) -> NDArray[np.complex128]:
    """Transpose over the position indices only."""
    return _transpose(rho.tensor, "position")


def occupied_support(rho: WalkerDensityMatrix) -> NDArray[np.complex128]:
    """
    The (x, c, y, d) tensor restricted to the sites its entries touch.

    The dropped rows and columns are exactly zero, so they would only add
    zero eigenvalues to any partial transpose.
    """
    tensor = rho.tensor
    occupied = np.flatnonzero(np.any(tensor != 0, axis=(1, 2, 3)) | np.any(tensor != 0, axis=(0, 1, 3)))
    if occupied.size == 0:
        raise NumericalInvariantError("Density matrix has no support")
    return tensor[np.ix_(occupied, [0, 1], occupied, [0, 1])]


def negativity(rho: WalkerDensityMatrix, subsystem: str = "coin") -> float:
    """
    Absolute sum of the negative eigenvalues of the partial transpose.

    Eigenvalues in (-1e-10, 0) count as zero. The result is cross-checked
    against (sum |lambda| - 1) / 2 and equals 1/2 for a Bell state.

    Args:
        rho: Density matrix
        subsystem: "coin" or "position"; both give the same spectrum

    Returns:
        float: Negativity in [0, 1/2]

    Raises:
        NumericalInvariantError: if the two formulas disagree beyond 1e-9
    """
    if subsystem not in PARTIAL_TRANSPOSE_AXES:
        raise ValueError(f"subsystem must be 'coin' or 'position', got {subsystem!r}")

    eigenvalues = hermitian_eigenvalues(_transpose(occupied_support(rho), subsystem))
    eigenvalues = np.where(
        (eigenvalues < 0) & (eigenvalues > -config.NEGATIVITY_ZERO_THRESHOLD), 0.0, eigenvalues
    )

    negative_sum = float(-eigenvalues[eigenvalues < 0].sum())
    from_abs = 0.5 * (float(np.abs(eigenvalues).sum()) - 1.0)
    if abs(negative_sum - from_abs) > config.NEGATIVITY_CROSSCHECK_TOL:
        raise NumericalInvariantError(
            f"Negativity formulas disagree: {negative_sum:.15g} vs {from_abs:.15g}"
        )
    return negative_sum


def negativity_unit(rho: WalkerDensityMatrix, subsystem: str = "coin") -> float:
    """Negativity on the unit scale, sum |lambda| - 1 (Bell state = 1)."""
    return 2.0 * negativity(rho, subsystem)
