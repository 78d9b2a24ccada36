import os
import sys
import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

# Add project root to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.observables.distribution import (
    Distribution,
    distribution,
    distribution_pure,
    linear_entropy,
    moments,
    purity,
    reduced_coin_state,
    total_variation,
)
from src.observables.entanglement import (
    negativity,
    negativity_unit,
    partial_transpose_coin,
    partial_transpose_position,
)
from src.observables.linalg import hermitian_eigensystem, hermitian_eigenvalues
from src.utils.errors import NumericalInvariantError
from src.walker.channel_factory import NoiseModel
from src.walker.evolution import evolve, evolve_pure
from src.walker.states import CoinConvention, PositionWindow, PureCoinState, PureWalkerState, WalkerDensityMatrix, init_state

UP = PureCoinState(0.0, 0.0)


def bell_state() -> WalkerDensityMatrix:
    """(|0,R> + |1,L>) / sqrt2 on a one-step window."""
    window = PositionWindow(1)
    amplitudes = np.zeros((window.n_sites, 2), dtype=complex)
    amplitudes[window.index(0), CoinConvention.R] = 1 / math.sqrt(2)
    amplitudes[window.index(1), CoinConvention.L] = 1 / math.sqrt(2)
    return PureWalkerState(amplitudes, window).to_density()


def product_state() -> WalkerDensityMatrix:
    """Mixed position (x) mixed coin, a separable state."""
    window = PositionWindow(1)
    position = np.diag([0.0, 0.3, 0.5, 0.2, 0.0]).astype(complex)
    position[1, 2] = position[2, 1] = 0.1
    coin = PureCoinState(0.4, 1.0).bloch().coin_matrix() * 0.8 + 0.1 * np.eye(2)
    return WalkerDensityMatrix(np.kron(position, coin), window)


class TestDistribution(unittest.TestCase):
    """Tests for the position distribution."""

    def test_point_mass(self):
        d = distribution(init_state(UP, 2))
        self.assertEqual(d.at(0), 1.0)
        self.assertEqual(d.total(), 1.0)

    def test_two_coherent_steps(self):
        d = distribution(evolve(init_state(UP, 2), NoiseModel.coherent(), 2).state)
        for x, expected in ((2, 0.25), (0, 0.5), (-2, 0.25)):
            self.assertAlmostEqual(d.at(x), expected, places=14)

    def test_normalised_after_noise(self):
        d = distribution(evolve(init_state(PureCoinState(1.2, 3.0), 12), NoiseModel.coin_measurement(0.4), 12).state)
        self.assertAlmostEqual(d.total(), 1.0, delta=1e-10)
        d.validate()

    def test_pure_matches_density(self):
        state = evolve_pure(UP, 2)
        np.testing.assert_allclose(
            distribution_pure(state).probabilities, distribution(state.to_density()).probabilities, atol=1e-15
        )

    def test_imaginary_diagonal_rejected(self):
        rho = init_state(UP, 1)
        corrupted = WalkerDensityMatrix(rho.matrix + 1e-6j * np.eye(rho.window.dim), rho.window)
        with self.assertRaises(NumericalInvariantError):
            distribution(corrupted)

    def test_shape_checked(self):
        with self.assertRaises(ValueError):
            Distribution(PositionWindow(1), np.ones(3))


class TestMoments(unittest.TestCase):
    """Tests for moments."""

    def test_one_coherent_step(self):
        record = moments(distribution(evolve(init_state(UP, 1), NoiseModel.coherent(), 1).state, 1))
        self.assertAlmostEqual(record.mean, 0.0, places=15)
        self.assertAlmostEqual(record.second_moment, 1.0, places=15)
        self.assertAlmostEqual(record.variance, 1.0, places=15)
        self.assertEqual(record.t, 1)

    def test_point_mass(self):
        record = moments(distribution(init_state(UP, 3)))
        self.assertEqual((record.mean, record.second_moment, record.variance), (0.0, 0.0, 0.0))

    def test_variance_shift(self):
        t, p = 10, 0.3
        base = moments(distribution(evolve(init_state(UP, t), NoiseModel.coherent(), t).state))
        noisy = moments(distribution(evolve(init_state(UP, t), NoiseModel.tunneling(p), t).state))
        self.assertAlmostEqual(noisy.variance - base.variance, p * t, delta=1e-9)


class TestPurity(unittest.TestCase):
    """Tests for purity and linear entropy."""

    def test_pure_state(self):
        rho = evolve(init_state(PureCoinState(0.3, 0.2), 10), NoiseModel.coherent(), 10).state
        self.assertAlmostEqual(purity(rho), 1.0, delta=1e-12)
        self.assertAlmostEqual(linear_entropy(rho), 0.0, delta=1e-12)

    def test_maximally_mixed(self):
        window = PositionWindow(2)
        rho = WalkerDensityMatrix(np.eye(window.dim) / window.dim, window)
        self.assertAlmostEqual(purity(rho), 1.0 / window.dim, places=15)
        self.assertAlmostEqual(linear_entropy(rho), 1.0 - 1.0 / window.dim, places=15)

    def test_strong_tunneling_decays_fast(self):
        rho = evolve(init_state(UP, 20), NoiseModel.tunneling(0.5), 20).state
        self.assertLess(purity(rho), 0.5)

    def test_reduced_coin_state(self):
        coin = PureCoinState(0.9, 1.3)
        rho = init_state(coin, 2)
        amplitudes = coin.amplitudes()
        np.testing.assert_allclose(reduced_coin_state(rho), np.outer(amplitudes, amplitudes.conj()), atol=1e-15)


class TestPartialTranspose(unittest.TestCase):
    """Tests for partial transposes."""

    def test_index_rule(self):
        rho = evolve(init_state(PureCoinState(0.5, 0.5), 3), NoiseModel.tunneling(0.3), 3).state
        pt = partial_transpose_coin(rho).reshape(rho.tensor.shape)
        self.assertEqual(pt[6, 0, 5, 1], rho.tensor[6, 1, 5, 0])

    def test_involution(self):
        rho = evolve(init_state(PureCoinState(0.5, 0.5), 3), NoiseModel.tunneling(0.3), 3).state
        twice = partial_transpose_coin(WalkerDensityMatrix(partial_transpose_coin(rho), rho.window))
        np.testing.assert_array_equal(twice, rho.matrix)

    def test_hermitian_and_trace(self):
        rho = evolve(init_state(UP, 4), NoiseModel.coin_measurement(0.2), 4).state
        pt = partial_transpose_coin(rho)
        np.testing.assert_allclose(pt, pt.conj().T, atol=1e-14)
        self.assertAlmostEqual(np.trace(pt).real, 1.0, delta=1e-12)

    def test_product_state_spectrum_unchanged(self):
        rho = product_state()
        np.testing.assert_allclose(
            hermitian_eigenvalues(partial_transpose_coin(rho)), hermitian_eigenvalues(rho.matrix), atol=1e-12
        )

    def test_bell_state_minimum_eigenvalue(self):
        eigenvalues = hermitian_eigenvalues(partial_transpose_coin(bell_state()))
        self.assertAlmostEqual(eigenvalues[0], -0.5, places=14)


class TestNegativity(unittest.TestCase):
    """Tests for negativity."""

    def test_separable_state(self):
        self.assertLess(negativity(product_state()), 1e-10)

    def test_bell_state(self):
        self.assertAlmostEqual(negativity(bell_state()), 0.5, places=12)
        self.assertAlmostEqual(negativity_unit(bell_state()), 1.0, places=12)

    def test_subsystems_agree(self):
        rho = evolve(init_state(UP, 8), NoiseModel.tunneling(0.4), 8).state
        self.assertAlmostEqual(negativity(rho, "coin"), negativity(rho, "position"), delta=1e-9)

    def test_pure_state_matches_schmidt_form(self):
        rho = evolve(init_state(PureCoinState(0.6, 2.0), 12), NoiseModel.coherent(), 12).state
        lam = hermitian_eigenvalues(reduced_coin_state(rho))
        self.assertAlmostEqual(negativity(rho), math.sqrt(max(lam[0], 0.0) * lam[1]), delta=1e-10)

    def test_unknown_subsystem(self):
        with self.assertRaises(ValueError):
            negativity(bell_state(), "spin")


class TestTotalVariation(unittest.TestCase):
    """Tests for total variation."""

    def test_uniform(self):
        window = PositionWindow(3)
        d = Distribution(window, np.full(window.n_sites, 1.0 / window.n_sites))
        self.assertAlmostEqual(total_variation(d), 2.0 / window.n_sites, places=15)

    def test_point_mass(self):
        self.assertEqual(total_variation(distribution(init_state(UP, 4))), 2.0)

    def test_reflection_invariant(self):
        d = distribution(evolve(init_state(UP, 15), NoiseModel.tunneling(0.3), 15).state)
        self.assertAlmostEqual(total_variation(d), total_variation(d.reflected()), places=14)


class TestHermitianEigenvalues(unittest.TestCase):
    """Tests for the eigenvalue contract."""

    def test_diagonal(self):
        np.testing.assert_array_equal(hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])

    def test_pauli_x(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]])), [-1.0, 1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
        m = (a + a.conj().T) / 2
        vals, vecs = hermitian_eigensystem(m)
        np.testing.assert_allclose((vecs * vals) @ vecs.conj().T, m, atol=1e-8)

    def test_non_hermitian_rejected(self):
        with self.assertRaises(ValueError):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, (6, 6), elements=st.floats(-10, 10)))
    def test_sum_equals_trace(self, a):
        m = (a + a.T) / 2
        vals = hermitian_eigenvalues(m)
        self.assertTrue(np.all(np.diff(vals) >= 0))
        self.assertAlmostEqual(vals.sum(), np.trace(m), delta=1e-8 * 6)


if __name__ == "__main__":
    unittest.main()
