"""
State types for the one-dimensional Hadamard walk.

Every array in the package orders the joint basis position-major: the
element for site ``x`` and coin ``c`` sits at ``2 * window.index(x) + c``.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import NDArray

import src.utils.config as config
from src.utils.errors import NumericalInvariantError
from src.observables.linalg import hermitian_eigenvalues


class CoinConvention:
    """Fixed coin basis: index 0 is |R> (shifts +1), index 1 is |L> (shifts -1)."""

    R = 0
    L = 1
    LABELS = ("R", "L")
    SHIFTS = (1, -1)

    HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
    PROJECTORS = (
        np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128),
        np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128),
    )
    # sigma_0 .. sigma_3; sigma_3 has |R> as its +1 eigenvector
    PAULI = (
        np.eye(2, dtype=np.complex128),
        np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
        np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
        np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
    )


@dataclass(frozen=True)
class PositionWindow:
    """Preallocated site range [-2T, 2T] for a run of at most T steps."""

    total_steps: int

    def __post_init__(self):
        if not isinstance(self.total_steps, (int, np.integer)) or self.total_steps < 0:
            raise ValueError(f"total_steps must be a non-negative integer, got {self.total_steps!r}")

    @property
    def x_min(self) -> int:
        return -2 * self.total_steps

    @property
    def x_max(self) -> int:
        return 2 * self.total_steps

    @property
    def n_sites(self) -> int:
        return 4 * self.total_steps + 1

    @property
    def dim(self) -> int:
        """Dimension of the joint position-coin space."""
        return 2 * self.n_sites

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_max + 1, dtype=np.int64)

    def index(self, x: int) -> int:
        """
        Array index of site ``x``.

        Raises:
            ValueError: if ``x`` lies outside the window
        """
        if not self.x_min <= x <= self.x_max:
            raise ValueError(f"Site {x} outside window [{self.x_min}, {self.x_max}]")
        return int(x) + 2 * self.total_steps


@dataclass(frozen=True)
class BlochVector:
    """Pauli-basis coordinates of a coin density matrix, rho = sum_i r_i sigma_i."""

    r1: float
    r2: float
    r3: float
    r0: float = 0.5

    def __post_init__(self):
        if abs(self.r0 - 0.5) > config.BLOCH_TOL:
            raise ValueError(f"r0 must equal 1/2 for a unit-trace coin state, got {self.r0}")
        if self.norm_squared > 0.25 + config.BLOCH_TOL:
            raise ValueError(
                f"Bloch vector ({self.r1}, {self.r2}, {self.r3}) has r1^2+r2^2+r3^2 = "
                f"{self.norm_squared:.15g} > 1/4"
            )

    @property
    def norm_squared(self) -> float:
        return self.r1 ** 2 + self.r2 ** 2 + self.r3 ** 2

    def coin_matrix(self) -> NDArray[np.complex128]:
        """The 2x2 coin density matrix."""
        p = CoinConvention.PAULI
        return self.r0 * p[0] + self.r1 * p[1] + self.r2 * p[2] + self.r3 * p[3]

    @classmethod
    def from_matrix(cls, coin: NDArray[np.complex128]) -> "BlochVector":
        r = [float(np.real(np.trace(s @ coin))) / 2.0 for s in CoinConvention.PAULI]
        return cls(r1=r[1], r2=r[2], r3=r[3], r0=r[0])


@dataclass(frozen=True)
class PureCoinState:
    """Coin state cos(theta)|R> + exp(i phi) sin(theta)|L>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    def amplitudes(self) -> NDArray[np.complex128]:
        return np.array(
            [math.cos(self.theta), np.exp(1j * self.phi) * math.sin(self.theta)],
            dtype=np.complex128,
        )

    def bloch(self) -> BlochVector:
        s2 = math.sin(2 * self.theta)
        return BlochVector(
            r1=0.5 * math.cos(self.phi) * s2,
            r2=0.5 * math.sin(self.phi) * s2,
            r3=0.5 * math.cos(2 * self.theta),
        )


CoinState = Union[PureCoinState, BlochVector]


class PureWalkerState:
    """Amplitude vector of the coherent walk, stored as a (sites, 2) array."""

    def __init__(self, amplitudes: NDArray[np.complex128], window: PositionWindow):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (window.n_sites, 2):
            raise ValueError(f"Expected amplitudes of shape {(window.n_sites, 2)}, got {amps.shape}")
        self.amplitudes = amps
        self.window = window

    @classmethod
    def localized(cls, coin: PureCoinState, total_steps: int) -> "PureWalkerState":
        """Walker at x = 0 with the given coin state."""
        window = PositionWindow(total_steps)
        amps = np.zeros((window.n_sites, 2), dtype=np.complex128)
        amps[window.index(0)] = coin.amplitudes()
        return cls(amps, window)

    @property
    def vector(self) -> NDArray[np.complex128]:
        """Flat amplitude vector in the joint basis."""
        return self.amplitudes.reshape(-1)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def to_density(self) -> "WalkerDensityMatrix":
        v = self.vector
        return WalkerDensityMatrix(np.outer(v, v.conj()), self.window)

    def copy(self) -> "PureWalkerState":
        return PureWalkerState(self.amplitudes.copy(), self.window)


class WalkerDensityMatrix:
    """Dense density matrix on the joint position-coin space of a window."""

    def __init__(self, matrix: NDArray[np.complex128], window: PositionWindow):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (window.dim, window.dim):
            raise ValueError(f"Expected matrix of shape {(window.dim, window.dim)}, got {m.shape}")
        self.matrix = m
        self.window = window

    @property
    def tensor(self) -> NDArray[np.complex128]:
        """View with axes (x, c, y, d) for element <x,c| rho |y,d>."""
        n = self.window.n_sites
        return self.matrix.reshape(n, 2, n, 2)

    @classmethod
    def from_tensor(cls, tensor: NDArray[np.complex128], window: PositionWindow) -> "WalkerDensityMatrix":
        return cls(np.ascontiguousarray(tensor).reshape(window.dim, window.dim), window)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def copy(self) -> "WalkerDensityMatrix":
        return WalkerDensityMatrix(self.matrix.copy(), self.window)

    def check_invariants(self, tol: float = config.DRIFT_TOL, check_psd: bool = False) -> None:
        """
        Verify unit trace, Hermiticity and (optionally) positivity.

        Raises:
            NumericalInvariantError: on the first violated invariant
        """
        trace = self.trace()
        if abs(trace - 1.0) > tol:
            raise NumericalInvariantError(f"Trace drifted to {trace:.15g}")

        deviation = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if deviation > tol:
            raise NumericalInvariantError(f"Density matrix not Hermitian (max deviation {deviation:.3e})")

        if check_psd:
            smallest = float(hermitian_eigenvalues(self.matrix)[0])
            if smallest < -config.NEGATIVITY_ZERO_THRESHOLD:
                raise NumericalInvariantError(f"Density matrix has eigenvalue {smallest:.3e} < 0")


def init_state(coin: CoinState, total_steps: int, window: Optional[PositionWindow] = None) -> WalkerDensityMatrix:
    """
    Localized walker at x = 0 with the given coin state.

    Args:
        coin: Pure coin state or Bloch vector
        total_steps: Number of steps the window must accommodate
        window: Optional explicit window (must hold ``total_steps``)

    Returns:
        WalkerDensityMatrix: rho_0 = |0><0| (x) rho_coin
    """
    if window is None:
        window = PositionWindow(total_steps)
    elif window.total_steps < total_steps:
        raise ValueError(f"Window for {window.total_steps} steps cannot hold {total_steps}")

    if isinstance(coin, PureCoinState):
        coin_matrix = np.outer(coin.amplitudes(), coin.amplitudes().conj())
    elif isinstance(coin, BlochVector):
        coin_matrix = coin.coin_matrix()
    else:
        raise TypeError(f"Expected PureCoinState or BlochVector, got {type(coin).__name__}")

    rho = np.zeros((window.n_sites, 2, window.n_sites, 2), dtype=np.complex128)
    i0 = window.index(0)
    rho[i0, :, i0, :] = coin_matrix
    return WalkerDensityMatrix.from_tensor(rho, window)
