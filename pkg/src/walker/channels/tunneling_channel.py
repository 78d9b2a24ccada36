from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.walker.channels.coherent_channel import CoherentChannel
from src.walker.operators import tunnel_shift, walk_unitary
from src.walker.states import PositionWindow, WalkerDensityMatrix


class TunnelingChannel(CoherentChannel):
    """
    Walk step followed by a coin-independent hop of +1 or -1 with probability p/2 each.

    rho -> (1-p) W + (p/2)(S+ W S+^dagger + S- W S-^dagger), W = U_w rho U_w^dagger
    """

    name = "tunneling"
    margin = 2

    def _apply(self, tensor: NDArray[np.complex128]) -> NDArray[np.complex128]:
        walked = self._coherent(tensor)
        if self.p == 0.0:
            return walked
        # The hop moves the row and column position together
        hopped = np.roll(walked, (1, 1), axis=(0, 2)) + np.roll(walked, (-1, -1), axis=(0, 2))
        return (1.0 - self.p) * walked + (self.p / 2.0) * hopped

    def weighted_operators(self, window: PositionWindow) -> List[Tuple[float, sparse.spmatrix]]:
        unitary = walk_unitary(window)
        return [
            (1.0 - self.p, unitary),
            (self.p / 2.0, tunnel_shift(window, 1) @ unitary),
            (self.p / 2.0, tunnel_shift(window, -1) @ unitary),
        ]


def tunneling_step(rho: WalkerDensityMatrix, p: float) -> WalkerDensityMatrix:
    """Apply one walk step with tunneling probability ``p``."""
    return TunnelingChannel(p).step(rho)
