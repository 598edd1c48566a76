"""
Tests for twisted averages and the certified circle suprema.
"""

import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from wwlab_core import ContractError, OrbitSeq, RangeError
from wwlab_twisted import (
    decay_profile,
    grid_sums,
    min_grid_size,
    modulate,
    sup_over_circle,
    twisted_average,
)


def random_sequence(seed, N, dim=1):
    rng = np.random.default_rng(seed)
    return OrbitSeq(rng.standard_normal((N, dim)) + 1j * rng.standard_normal((N, dim)))


class TestTwistedAverage(unittest.TestCase):

    def setUp(self):
        self.ones = OrbitSeq(np.ones(2))

    def test_constant_sequence(self):
        """(1/2)(lambda + lambda^2) at lambda = 1 and -1."""
        self.assertAlmostEqual(twisted_average(self.ones, 1, 2).coords[0], 1.0)
        self.assertAlmostEqual(abs(twisted_average(self.ones, -1, 2).coords[0]), 0.0)

    def test_lambda_must_be_unimodular(self):
        """Points off the unit circle are rejected."""
        with self.assertRaises(ContractError):
            twisted_average(self.ones, 1.01, 2)

    def test_horizon_must_fit(self):
        """N cannot exceed the prefix length."""
        with self.assertRaises(RangeError):
            twisted_average(self.ones, 1, 3)


class TestGrid(unittest.TestCase):

    def test_min_grid_size(self):
        """ceil(pi N) + 2."""
        self.assertEqual(min_grid_size(10), 34)

    def test_grid_sums_match_direct_evaluation(self):
        """The padded FFT equals the polynomial evaluated on the shifted grid."""
        v = random_sequence(1, 10, dim=2)
        M, offset = 40, 0.1
        S = grid_sums(v, 10, M, offset)
        n = np.arange(1, 11)
        for k in (0, 7, 39):
            lam = np.exp(2j * np.pi * n * (offset + k / M))
            np.testing.assert_allclose(S[k], lam @ v.values, atol=1e-10)

    def test_grid_max_grows_on_refined_grids(self):
        """The M-point grid is contained in the 2M-point grid."""
        v = random_sequence(5, 24, dim=2)
        coarse = sup_over_circle(v, 24, 96)
        fine = sup_over_circle(v, 24, 192)
        self.assertGreaterEqual(fine.grid_max, coarse.grid_max - 1e-12)

    def test_grid_too_small(self):
        """M must leave room for the Bernstein factor."""
        with self.assertRaises(ContractError):
            sup_over_circle(random_sequence(0, 10), 10, M=30)

    def test_offset_catches_known_frequency(self):
        """With the offset on the conjugate frequency the grid hits the peak."""
        alpha = 0.3141592653589793
        N = 100
        v = OrbitSeq(np.exp(-2j * np.pi * alpha * np.arange(1, N + 1)))
        cert = sup_over_circle(v, N, offset=alpha)
        self.assertAlmostEqual(cert.grid_max, 1.0, places=12)
        self.assertEqual(cert.grid_index, 0)
        self.assertGreaterEqual(cert.certified_upper, cert.grid_max)

    def test_decay_profile_validation(self):
        """Checkpoints ascend and fit within the orbit."""
        v = random_sequence(2, 64)
        self.assertEqual([c.degree for c in decay_profile(v, [8, 16, 64])], [8, 16, 64])
        with self.assertRaises(ContractError):
            decay_profile(v, [16, 8])
        with self.assertRaises(RangeError):
            decay_profile(v, [8, 128])

    def test_modulation(self):
        """Modulating by lambda0 moves the average at lambda0 to lambda = 1."""
        v = random_sequence(3, 32)
        lam0 = np.exp(2j * np.pi * 0.2)
        direct = twisted_average(v, lam0, 32).coords[0]
        moved = twisted_average(modulate(v, lam0), 1, 32).coords[0]
        self.assertAlmostEqual(direct, moved, places=10)
        np.testing.assert_allclose(modulate(v, 1).values, v.values)


class TestCertificateProperties(unittest.TestCase):

    @given(st.integers(0, 10_000), st.integers(1, 64), st.integers(1, 2), st.floats(0, 1))
    @settings(max_examples=80, deadline=None)
    def test_certificate_brackets_every_point(self, seed, N, dim, theta):
        """Any point of the circle lies below the certified upper bound."""
        v = random_sequence(seed, N, dim)
        cert = sup_over_circle(v, N)
        value = twisted_average(v, np.exp(2j * np.pi * theta), N).norm()
        self.assertLessEqual(value, cert.certified_upper + 1e-9)
        self.assertLessEqual(cert.grid_max, cert.certified_upper + 1e-12)

    @given(st.integers(0, 10_000), st.floats(0.1, 10))
    @settings(max_examples=40, deadline=None)
    def test_scale_equivariance(self, seed, scale):
        """sup ||(1/N) sum c v_n lambda^n|| = c sup ||...||."""
        v = random_sequence(seed, 32)
        scaled = OrbitSeq(scale * v.values)
        a, b = sup_over_circle(v, 32), sup_over_circle(scaled, 32)
        self.assertAlmostEqual(b.grid_max, scale * a.grid_max, delta=1e-9 * scale)


if __name__ == '__main__':
    unittest.main()
