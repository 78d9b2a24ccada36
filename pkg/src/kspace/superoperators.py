"""
Momentum-space coin Kraus matrices and their 4x4 superoperators.

A 2x2 matrix O is represented by its Pauli coordinates r_i = Tr(sigma_i O) / 2.
In that representation the k-diagonal step O -> sum_n C_n O C_n^dagger is the
p-independent matrix L_k, its first k-derivative is G_k, and the second
(mixed) derivative is J_k.
"""

from typing import Callable, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

import src.utils.config as config
from src.walker.states import CoinConvention

KrausTriple = Tuple[NDArray[np.complex128], NDArray[np.complex128], NDArray[np.complex128]]

SIGMA = np.stack(CoinConvention.PAULI)
SIGMA_3_CONJUGATION = np.diag([1.0, -1.0, -1.0, 1.0]).astype(np.complex128)


def walk_unitary_k(k: float) -> NDArray[np.complex128]:
    """Coherent one-step matrix U(k) = diag(e^{-ik}, e^{ik}) H."""
    return np.diag([np.exp(-1j * k), np.exp(1j * k)]) @ CoinConvention.HADAMARD


def coin_kraus_k(p: float, k: float, explicit: bool = False) -> KrausTriple:
    """
    Coin Kraus matrices (C1, C2, C3) of the tunneling walk at momentum k.

    Args:
        p: Tunneling probability
        k: Momentum
        explicit: Build from the written-out entries instead of U(k) factors

    Returns:
        KrausTriple: C1 = sqrt(1-p) U, C2 = sqrt(p/2) e^{-ik} U, C3 = sqrt(p/2) e^{ik} U
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Tunneling probability must lie in [0, 1], got {p}")

    if explicit:
        e1, e2 = np.exp(1j * k), np.exp(2j * k)
        c1 = np.sqrt((1.0 - p) / 2.0) * np.array([[1 / e1, 1 / e1], [e1, -e1]])
        c2 = (np.sqrt(p) / 2.0) * np.array([[1 / e2, 1 / e2], [1.0, -1.0]])
        c3 = (np.sqrt(p) / 2.0) * np.array([[1.0, 1.0], [e2, -e2]])
        return c1, c2, c3

    u = walk_unitary_k(k)
    hop = np.sqrt(p / 2.0)
    return np.sqrt(1.0 - p) * u, hop * np.exp(-1j * k) * u, hop * np.exp(1j * k) * u


def to_affine(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Pauli coordinates (r0, r1, r2, r3) of a 2x2 matrix."""
    return np.einsum("iab,ba->i", SIGMA, matrix) / 2.0


def from_affine(vector: ArrayLike) -> NDArray[np.complex128]:
    """2x2 matrix sum_i r_i sigma_i."""
    return np.einsum("i,iab->ab", np.asarray(vector, dtype=np.complex128), SIGMA)


def superoperator_matrix(action: Callable[[NDArray[np.complex128]], NDArray[np.complex128]]) -> NDArray[np.complex128]:
    """4x4 matrix of a linear map on 2x2 matrices, column j = image of sigma_j."""
    return np.stack([to_affine(action(sigma)) for sigma in SIGMA], axis=1)


def _derivative(p: float, k: float, h: float) -> KrausTriple:
    plus, minus = coin_kraus_k(p, k + h), coin_kraus_k(p, k - h)
    return tuple((a - b) / (2.0 * h) for a, b in zip(plus, minus))


def apply_L_direct(k: float, p: float, vector: ArrayLike) -> NDArray[np.complex128]:
    """One k-diagonal step sum_n C_n O C_n^dagger through explicit 2x2 products."""
    operand = from_affine(vector)
    image = sum(c @ operand @ c.conj().T for c in coin_kraus_k(p, k))
    return to_affine(image)


def _trig(k: ArrayLike) -> Tuple[NDArray, NDArray, Tuple[int, ...]]:
    k = np.asarray(k, dtype=np.float64)
    return np.sin(2.0 * k), np.cos(2.0 * k), k.shape


def build_L(k: ArrayLike) -> NDArray[np.complex128]:
    """Closed form of L_k; accepts an array of momenta (result shape (..., 4, 4))."""
    s, c, shape = _trig(k)
    out = np.zeros(shape + (4, 4), dtype=np.complex128)
    out[..., 0, 0] = 1.0
    out[..., 1, 2], out[..., 1, 3] = s, c
    out[..., 2, 2], out[..., 2, 3] = -c, s
    out[..., 3, 1] = 1.0
    return out


def build_G(k: ArrayLike) -> NDArray[np.complex128]:
    """Closed form of G_k, the map O -> sum_n dC_n/dk O C_n^dagger."""
    s, c, shape = _trig(k)
    out = np.zeros(shape + (4, 4), dtype=np.complex128)
    out[..., 0, 1] = -1j
    out[..., 1, 2], out[..., 1, 3] = c, -s
    out[..., 2, 2], out[..., 2, 3] = s, c
    out[..., 3, 0] = -1j
    return out


def build_G_dagger(k: ArrayLike) -> NDArray[np.complex128]:
    """Closed form of the map O -> sum_n C_n O dC_n^dagger/dk'; the conjugate of G_k."""
    return build_G(k).conj()


def build_J(k: ArrayLike, p: float) -> NDArray[np.complex128]:
    """Closed form of J_k, the map O -> sum_n dC_n/dk O dC_n^dagger/dk', with q = p - 1."""
    s, c, shape = _trig(k)
    q = p - 1.0
    out = np.zeros(shape + (4, 4), dtype=np.complex128)
    out[..., 0, 0] = 1.0 + p
    out[..., 1, 2], out[..., 1, 3] = q * s, q * c
    out[..., 2, 2], out[..., 2, 3] = -q * c, q * s
    out[..., 3, 1] = 1.0 + p
    return out


def build_L_direct(k: float, p: float) -> NDArray[np.complex128]:
    """L_k assembled column by column from apply_L_direct."""
    return np.stack([apply_L_direct(k, p, e) for e in np.eye(4)], axis=1)


def build_G_fd(k: float, p: float, h: float = config.FINITE_DIFFERENCE_STEP) -> NDArray[np.complex128]:
    """G_k from central differences of the Kraus matrices."""
    kraus, dkraus = coin_kraus_k(p, k), _derivative(p, k, h)
    return superoperator_matrix(lambda o: sum(d @ o @ c.conj().T for c, d in zip(kraus, dkraus)))


def build_G_dagger_fd(k: float, p: float, h: float = config.FINITE_DIFFERENCE_STEP) -> NDArray[np.complex128]:
    kraus, dkraus = coin_kraus_k(p, k), _derivative(p, k, h)
    return superoperator_matrix(lambda o: sum(c @ o @ d.conj().T for c, d in zip(kraus, dkraus)))


def build_J_fd(k: float, p: float, h: float = config.FINITE_DIFFERENCE_STEP) -> NDArray[np.complex128]:
    dkraus = _derivative(p, k, h)
    return superoperator_matrix(lambda o: sum(d @ o @ d.conj().T for d in dkraus))


def q_identity_deviation(k: float, p: float, vector: ArrayLike) -> float:
    """
    Max deviation of J(O) from sigma3 W(O) sigma3 + p W(O), W the coherent step.

    Zero exactly when the undetermined entry of J is q = p - 1.
    """
    operand = from_affine(vector)
    u = walk_unitary_k(k)
    walked = u @ operand @ u.conj().T
    sigma3 = CoinConvention.PAULI[3]
    expected = sigma3 @ walked @ sigma3 + p * walked
    actual = from_affine(build_J(k, p) @ np.asarray(vector, dtype=np.complex128))
    return float(np.max(np.abs(actual - expected)))
