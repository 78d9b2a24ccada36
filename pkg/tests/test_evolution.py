import os
import sys
import math
import unittest

import numpy as np

# Add project root to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.observables.distribution import distribution, distribution_pure, moments, purity
from src.utils.errors import WindowOverflowError
from src.walker.channel_factory import NoiseModel
from src.walker.evolution import evolve, evolve_pure
from src.walker.states import BlochVector, PureCoinState, init_state

UP = PureCoinState(0.0, 0.0)


def moment_series(coin, noise, steps):
    observers = {"m": lambda rho: moments(distribution(rho))}
    return evolve(init_state(coin, steps), noise, steps, observers).column("m")


class TestEvolve(unittest.TestCase):
    """Tests for multi-step evolution."""

    def test_zero_steps_returns_initial_state(self):
        rho0 = init_state(PureCoinState(0.4, 1.0), 3)
        result = evolve(rho0, NoiseModel.coherent(), 0)
        np.testing.assert_array_equal(result.state.matrix, rho0.matrix)
        self.assertEqual(len(result.records), 1)

    def test_records_cover_every_step(self):
        result = evolve(init_state(UP, 5), NoiseModel.tunneling(0.2), 5, {"purity": purity})
        self.assertEqual([rec["t"] for rec in result.records], list(range(6)))
        self.assertEqual(result.column("purity")[0], 1.0)

    def test_initial_state_not_modified(self):
        rho0 = init_state(UP, 3)
        before = rho0.matrix.copy()
        evolve(rho0, NoiseModel.tunneling(0.5), 3)
        np.testing.assert_array_equal(rho0.matrix, before)

    def test_trace_after_fifty_tunneling_steps(self):
        result = evolve(init_state(UP, 50), NoiseModel.tunneling(0.1), 50)
        self.assertAlmostEqual(result.state.trace().real, 1.0, delta=1e-10)
        self.assertLess(abs(result.state.trace().imag), 1e-10)

    def test_state_stays_positive(self):
        result = evolve(init_state(PureCoinState(1.0, 0.5), 8), NoiseModel.coin_measurement(0.3), 8)
        result.state.check_invariants(check_psd=True)

    def test_too_many_steps(self):
        with self.assertRaises(WindowOverflowError):
            evolve(init_state(UP, 3), NoiseModel.coherent(), 4)

    def test_deterministic(self):
        a = evolve(init_state(UP, 10), NoiseModel.tunneling(0.3), 10).state.matrix
        b = evolve(init_state(UP, 10), NoiseModel.tunneling(0.3), 10).state.matrix
        np.testing.assert_array_equal(a, b)

    def test_drift_sign_of_up_state(self):
        final = moment_series(UP, NoiseModel.coherent(), 20)[-1]
        self.assertGreater(final.mean, 0.0)
        down = moment_series(PureCoinState(math.pi / 2, 0.0), NoiseModel.coherent(), 20)[-1]
        self.assertAlmostEqual(down.mean, -final.mean, delta=1e-12)


class TestChannelIdentities(unittest.TestCase):
    """Exact moment relations between channels."""

    def test_tunneling_keeps_mean(self):
        coin = BlochVector(0.2, 0.1, -0.3)
        base = moment_series(coin, NoiseModel.coherent(), 40)
        noisy = moment_series(coin, NoiseModel.tunneling(0.6), 40)
        for a, b in zip(base, noisy):
            self.assertAlmostEqual(a.mean, b.mean, delta=1e-10)

    def test_tunneling_adds_p_t_to_variance(self):
        p = 0.45
        base = moment_series(UP, NoiseModel.coherent(), 40)
        noisy = moment_series(UP, NoiseModel.tunneling(p), 40)
        for t, (a, b) in enumerate(zip(base, noisy)):
            self.assertAlmostEqual(b.variance - a.variance, p * t, delta=1e-9)

    def test_full_coin_measurement_is_classical(self):
        series = moment_series(UP, NoiseModel.coin_measurement(1.0), 20)
        for t, record in enumerate(series):
            self.assertAlmostEqual(record.variance, float(t), delta=1e-10)


class TestEvolvePure(unittest.TestCase):
    """Tests for the coherent pure-state path."""

    def test_matches_density_evolution(self):
        coin = PureCoinState(0.8, 0.6)
        pure = distribution_pure(evolve_pure(coin, 15))
        mixed = distribution(evolve(init_state(coin, 15), NoiseModel.coherent(), 15).state)
        np.testing.assert_allclose(pure.probabilities, mixed.probabilities, atol=1e-12)

    def test_coherent_parity(self):
        d = distribution_pure(evolve_pure(UP, 9))
        odd_sum = (d.positions + 9) % 2 == 1
        self.assertEqual(float(np.abs(d.probabilities[odd_sum]).max()), 0.0)


if __name__ == "__main__":
    unittest.main()
