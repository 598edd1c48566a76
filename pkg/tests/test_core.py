"""
Unit tests for the core vector, sequence and Cesaro functionals.
"""

import math
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from wwlab_core import (
    EXACT_RATIONAL,
    FIXED_ONE,
    ConfigError,
    ContractError,
    CVec,
    OrbitSeq,
    RangeError,
    ResourceError,
    WWLabError,
    approximation_profile,
    cesaro_norm,
    clip,
    dist_to_bounded,
    finite_sums,
    fixed_sqrt2_minus_1,
    fixed_to_float,
    fixed_to_fraction,
    partial_sums,
    same_dimension,
    shift_sequence,
    to_fixed,
)

finite_floats = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)


class TestFixedPoint(unittest.TestCase):

    def test_to_fixed_parses_exact_strings(self):
        """Rational and decimal strings convert without rounding."""
        self.assertEqual(to_fixed("1/4"), FIXED_ONE // 4)
        self.assertEqual(to_fixed("0.25"), FIXED_ONE // 4)
        self.assertEqual(to_fixed(0.5), FIXED_ONE // 2)

    def test_to_fixed_reduces_mod_one(self):
        """Values outside [0, 1) wrap around."""
        self.assertEqual(to_fixed(Fraction(5, 4)), FIXED_ONE // 4)
        self.assertEqual(to_fixed(Fraction(-1, 4)), 3 * FIXED_ONE // 4)

    def test_to_fixed_rejects_booleans(self):
        """A boolean is not a phase."""
        with self.assertRaises(ContractError):
            to_fixed(True)

    def test_sqrt2_minus_1(self):
        """The integer square root gives sqrt(2) - 1 to double precision."""
        self.assertAlmostEqual(fixed_to_float(fixed_sqrt2_minus_1()), math.sqrt(2) - 1, places=15)

    def test_fraction_round_trip(self):
        """fixed_to_fraction is exact on dyadic values."""
        self.assertEqual(fixed_to_fraction(to_fixed("3/8")), Fraction(3, 8))


class TestCVec(unittest.TestCase):

    def test_norm(self):
        """Euclidean norm on C^d."""
        self.assertAlmostEqual(CVec((3, 4j)).norm(), 5.0)

    def test_inner_product_conjugates_second_argument(self):
        """<a, b> = sum a_j conj(b_j)."""
        a = CVec((1, 1j))
        self.assertAlmostEqual(a.inner(a), 2.0)
        self.assertAlmostEqual(CVec((1j,)).inner(CVec((1,))), 1j)

    def test_dimension_mismatch(self):
        """Vectors of different dimension cannot be combined."""
        with self.assertRaises(ContractError):
            CVec((1, 2)) + CVec((1,))

    def test_empty_vector(self):
        """E = C^d needs d >= 1."""
        with self.assertRaises(ContractError):
            CVec(())


class TestOrbitSeq(unittest.TestCase):

    def setUp(self):
        self.seq = OrbitSeq(np.array([1.0, 3.0, 0.0, 2.0]))

    def test_one_dimensional_input_is_reshaped(self):
        """A flat array becomes an (N, 1) sequence."""
        self.assertEqual(self.seq.values.shape, (4, 1))
        self.assertEqual(self.seq.dim, 1)
        self.assertEqual(len(self.seq), 4)

    def test_value_is_one_based(self):
        """value(1) is the first term."""
        self.assertEqual(self.seq.value(1).coords, (1 + 0j,))
        with self.assertRaises(RangeError):
            self.seq.value(0)
        with self.assertRaises(RangeError):
            self.seq.value(5)

    def test_unknown_model(self):
        """Only the three arithmetic models are accepted."""
        with self.assertRaises(ContractError):
            OrbitSeq(np.ones(3), "decimal")

    def test_from_vectors_checks_dimensions(self):
        """Mixed dimensions are rejected."""
        with self.assertRaises(ContractError):
            OrbitSeq.from_vectors([CVec((1,)), CVec((1, 2))])

    def test_prefix_and_shift(self):
        """prefix keeps the first N terms and shift drops the first h."""
        self.assertEqual(len(self.seq.prefix(2)), 2)
        shifted = shift_sequence(self.seq, 1)
        self.assertEqual(shifted.value(1).coords, (3 + 0j,))
        self.assertEqual(shifted.provenance["shift"], 1)
        self.assertEqual(shift_sequence(shifted, 2).provenance["shift"], 3)
        with self.assertRaises(RangeError):
            shift_sequence(self.seq, 4)


class TestCesaroFunctionals(unittest.TestCase):

    def setUp(self):
        self.seq = OrbitSeq(np.array([1.0, 3.0]))
        self.exact = OrbitSeq(np.array([[Fraction(1)], [Fraction(0)], [Fraction(2)]], dtype=object),
                              EXACT_RATIONAL)

    def test_cesaro_norm_takes_the_largest_running_mean(self):
        """max(1/1, 4/2) = 2."""
        self.assertAlmostEqual(cesaro_norm(self.seq, 2), 2.0)
        self.assertAlmostEqual(cesaro_norm(self.seq, 1), 1.0)

    def test_cesaro_norm_exact(self):
        """Exact data gives an exact Fraction."""
        self.assertEqual(cesaro_norm(self.exact, 3), Fraction(1))

    def test_horizon_validation(self):
        """N must lie in 1..len(seq)."""
        with self.assertRaises(RangeError):
            cesaro_norm(self.seq, 3)
        with self.assertRaises(RangeError):
            cesaro_norm(self.seq, 0)

    def test_dist_to_bounded(self):
        """Only the excess over the clip level counts."""
        self.assertAlmostEqual(dist_to_bounded(self.seq, 2, 2), 0.5)
        self.assertEqual(dist_to_bounded(self.seq, 3, 2), 0.0)
        self.assertEqual(dist_to_bounded(self.exact, 1, 3), Fraction(1, 3))
        with self.assertRaises(ContractError):
            dist_to_bounded(self.seq, -1, 2)

    def test_approximation_profile_is_nonincreasing(self):
        """Raising the clip level never increases the distance."""
        profile = approximation_profile(self.seq, 2, [3, 0, 1, 2])
        self.assertEqual([M for M, _ in profile], [0, 1, 2, 3])
        distances = [d for _, d in profile]
        self.assertTrue(all(b <= a for a, b in zip(distances, distances[1:])))

    def test_clip(self):
        """Radial clipping keeps direction and caps the norm."""
        v = CVec((3, 4))
        self.assertAlmostEqual(clip(v, 1).norm(), 1.0)
        self.assertEqual(clip(v, 10), v)

    def test_partial_sums(self):
        """Running sums and their largest norm."""
        profile = partial_sums(OrbitSeq(np.array([1.0, 2.0, -4.0])))
        np.testing.assert_allclose(profile.V[:, 0], [1, 3, -1])
        self.assertAlmostEqual(profile.maxnorm, 3.0)
        exact = partial_sums(self.exact)
        self.assertEqual(exact.maxnorm, Fraction(3))

    def test_same_dimension(self):
        """Mixed-dimension experiments are rejected."""
        self.assertEqual(same_dimension(self.seq, self.seq), 1)
        with self.assertRaises(ContractError):
            same_dimension(self.seq, OrbitSeq(np.ones((2, 2))))

    @given(st.lists(finite_floats, min_size=1, max_size=40), finite_floats)
    @settings(max_examples=60, deadline=None)
    def test_cesaro_norm_scales(self, values, scale):
        """||c v||_ces = |c| ||v||_ces."""
        seq = OrbitSeq(np.array(values))
        scaled = OrbitSeq(scale * np.array(values))
        N = len(values)
        self.assertAlmostEqual(cesaro_norm(scaled, N), abs(scale) * cesaro_norm(seq, N),
                               delta=1e-9 * (1 + abs(scale) * 100))

    @given(st.lists(finite_floats, min_size=2, max_size=40))
    @settings(max_examples=60, deadline=None)
    def test_cesaro_norm_monotone_in_horizon(self, values):
        """The finite Cesaro norm is nondecreasing in N."""
        seq = OrbitSeq(np.array(values))
        norms = [cesaro_norm(seq, N) for N in range(1, len(values) + 1)]
        self.assertTrue(all(b >= a for a, b in zip(norms, norms[1:])))


class TestFiniteSums(unittest.TestCase):

    def test_powers_of_two(self):
        """Binary generators give every integer below 2^depth."""
        self.assertEqual(finite_sums([1, 2, 4], 3), list(range(1, 8)))

    def test_distinct_sorted(self):
        """Coinciding sums appear once."""
        self.assertEqual(finite_sums([1, 2, 3], 3), [1, 2, 3, 4, 5, 6])

    def test_validation(self):
        """depth bounds and positive generators."""
        with self.assertRaises(ResourceError):
            finite_sums(range(1, 30), 21)
        with self.assertRaises(ContractError):
            finite_sums([1, 0], 2)
        with self.assertRaises(ContractError):
            finite_sums([1], 2)


class TestErrorHierarchy(unittest.TestCase):

    def test_errors_are_value_errors(self):
        """Callers can catch every lab error as ValueError."""
        for cls in (RangeError, ContractError, ResourceError, ConfigError):
            self.assertTrue(issubclass(cls, WWLabError))
            self.assertTrue(issubclass(cls, ValueError))


if __name__ == '__main__':
    unittest.main()
