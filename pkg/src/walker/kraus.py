"""
Completeness check of the position-space Kraus sets.
"""

from typing import Tuple

import numpy as np

from src.walker.channel_factory import ChannelFactory, NoiseModel
from src.walker.states import PositionWindow

# Small window; the operators are translation invariant away from the edges
CHECK_WINDOW_STEPS = 3


def kraus_completeness_check(noise: NoiseModel, window: PositionWindow = PositionWindow(CHECK_WINDOW_STEPS)) -> Tuple[bool, float]:
    """
    Verify sum_n E_n^dagger E_n = I on the interior of a window.

    The truncated shift is not unitary at the window edges, so the comparison
    is restricted to sites at least the channel margin away from them.

    Args:
        noise: Noise model whose Kraus set is checked
        window: Window to build the operators on

    Returns:
        Tuple[bool, float]: (passed at 1e-12, max elementwise deviation)
    """
    channel = ChannelFactory.create_channel(noise)
    operators = channel.kraus_operators(window)

    total = np.zeros((window.dim, window.dim), dtype=np.complex128)
    for op in operators:
        total += (op.conj().T @ op).toarray()

    m = channel.margin
    interior = slice(2 * m, window.dim - 2 * m)
    block = total[interior, interior]
    deviation = float(np.max(np.abs(block - np.eye(block.shape[0])))) if block.size else 0.0
    return deviation < 1e-12, deviation
