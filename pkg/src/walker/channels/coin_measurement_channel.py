from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.walker.channels.coherent_channel import CoherentChannel
from src.walker.operators import coin_operator, walk_unitary
from src.walker.states import CoinConvention, PositionWindow, WalkerDensityMatrix


class CoinMeasurementChannel(CoherentChannel):
    """Walk step after which the coin is measured in the R/L basis with probability p."""

    name = "coin"

    def _apply(self, tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
        walked = self._coherent(tensor)
        # Measurement damps coin coherences and leaves the coin-diagonal blocks intact
        walked[:, CoinConvention.R, :, CoinConvention.L] *= 1.0 - self.p
        walked[:, CoinConvention.L, :, CoinConvention.R] *= 1.0 - self.p
        return walked

    def weighted_operators(self, window: PositionWindow) -> List[Tuple[float, sparse.spmatrix]]:
        unitary = walk_unitary(window)
        return [(1.0 - self.p, unitary)] + [
            (self.p, coin_operator(window, projector) @ unitary)
            for projector in CoinConvention.PROJECTORS
        ]


def coin_measure_step(rho: WalkerDensityMatrix, p: float) -> WalkerDensityMatrix:
    """Apply one walk step with coin-measurement probability ``p``."""
    return CoinMeasurementChannel(p).step(rho)
