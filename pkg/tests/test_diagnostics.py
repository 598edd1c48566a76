"""
Tests for mixing profiles, mild-mixing probes, pointwise Cesaro bounds and
the exact dyadic averages.
"""

import csv
import os
import tempfile
import unittest
from fractions import Fraction

import numpy as np

from wwlab_core import ContractError, RangeError, ResourceError, fixed_sqrt2_minus_1
from wwlab_diagnostics import (
    FSSet,
    correlations,
    dyadic_cesaro_average,
    dyadic_mean_ergodicity,
    dyadic_pairing_sequence,
    horizon_grid,
    mild_mixing_probe,
    mixing_profile,
    pacb_ratio,
    selected_count,
    spacb_sup_ratio,
    write_profile_csv,
)
from wwlab_operators import (
    DYADIC_S,
    DYADIC_T,
    CharacterMultiplier,
    DyadicMass,
    OperatorSpec,
    selection_predicate,
)
from wwlab_systems import MapSpec, Observable, StepObservable, continued_fraction_denominators


class TestMixingProfile(unittest.TestCase):

    def setUp(self):
        self.e1 = Observable.character(1)
        self.bernoulli = OperatorSpec.koopman(MapSpec.doubling())
        self.rotation = OperatorSpec.koopman(MapSpec.rotation(fixed_sqrt2_minus_1()))

    def test_horizon_grid(self):
        """Powers of two from 16, closed by H_max."""
        self.assertEqual(horizon_grid(100), [16, 32, 64, 100])
        self.assertEqual(horizon_grid(64), [16, 32, 64])

    def test_bernoulli_is_mixing(self):
        """Only h = 0 contributes, so the absolute average is 1/H."""
        profile = mixing_profile(self.bernoulli, self.e1, self.e1, 256)
        self.assertEqual(profile.method, "exact-coefficients")
        for H, a in zip(profile.horizons, profile.abs_avg):
            self.assertAlmostEqual(a, 1.0 / H, places=14)
        self.assertEqual(profile.tail_sup[-1], 0.0)
        self.assertTrue(profile.hierarchy_holds())

    def test_rotation_is_ergodic_but_rigid(self):
        """Unimodular pairings average out while their moduli stay at 1."""
        profile = mixing_profile(self.rotation, self.e1, self.e1, 1024)
        for H, e, a in zip(profile.horizons, profile.ergodic_avg, profile.abs_avg):
            self.assertLessEqual(abs(e), 1.1 / H)
            self.assertAlmostEqual(a, 1.0, places=12)
        self.assertTrue(profile.hierarchy_holds())

    def test_disjoint_frequencies(self):
        """Rotations never move e(x) onto e(3x)."""
        profile = mixing_profile(self.rotation, self.e1, Observable.character(3), 64)
        self.assertTrue(np.all(np.abs(profile.pairings) == 0))

    def test_horizon_limits(self):
        """H_max must lie in 16..65536."""
        with self.assertRaises(ContractError):
            mixing_profile(self.rotation, self.e1, self.e1, 8)
        with self.assertRaises(ResourceError):
            mixing_profile(self.rotation, self.e1, self.e1, 70000)

    def test_dyadic_profile_is_exact(self):
        """Four selected steps among the first sixteen carry mass 1/2 each."""
        op = OperatorSpec.dyadic_s()
        profile = mixing_profile(op, DyadicMass.indicator_upper_half(), selection_predicate(DYADIC_S), 64)
        self.assertEqual(profile.method, "exact-dyadic")
        self.assertEqual(profile.exact_ergodic_avg[0], Fraction(1, 8))

    def test_dyadic_t_pairing_cap(self):
        """DyadicT cannot be iterated past its index cap."""
        op = OperatorSpec.dyadic_t()
        with self.assertRaises(ResourceError):
            correlations(op, DyadicMass.indicator_upper_half(), selection_predicate(DYADIC_T), 26)

    def test_qmc_fallback(self):
        """Step multipliers take the sampled path and report an error bar."""
        op = OperatorSpec.non_contractive_s("1/4")
        profile = mixing_profile(op, self.e1, self.e1, 16, samples=256, seed=3)
        self.assertEqual(profile.method, "qmc")
        self.assertGreaterEqual(profile.stderr, 0.0)
        self.assertEqual(profile.horizons, (16,))
        self.assertAlmostEqual(profile.pairings[0], 1.0, delta=1e-9)

    def test_csv_columns(self):
        """The profile CSV has one row per horizon."""
        profile = mixing_profile(self.bernoulli, self.e1, self.e1, 32)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "profile.csv")
            write_profile_csv(profile, path)
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ["H", "ergodic_avg_re", "ergodic_avg_im", "abs_avg", "tail_sup"])
        self.assertEqual([r[0] for r in rows[1:]], ["16", "32"])


class TestMildMixingProbe(unittest.TestCase):

    def setUp(self):
        self.e1 = Observable.character(1)

    def test_fs_set(self):
        """Elements are the distinct subset sums."""
        self.assertEqual(FSSet.from_generators([1, 2, 4]).elements, tuple(range(1, 8)))
        self.assertEqual(FSSet.from_generators([3, 5, 9], depth=2).elements, (3, 5, 8))

    def test_bernoulli_probe_vanishes(self):
        """Doubling moves e(x) to e(2^h x), orthogonal to e(x)."""
        op = OperatorSpec.koopman(MapSpec.doubling())
        result = mild_mixing_probe(op, self.e1, self.e1, FSSet.from_generators([1, 2, 4, 8]))
        self.assertEqual(result.max_abs, 0.0)

    def test_rotation_is_rigid_along_denominators(self):
        """Sums of convergent denominators return the rotation close to the identity."""
        alpha = fixed_sqrt2_minus_1()
        dens = continued_fraction_denominators(alpha, 10)[4:]
        op = OperatorSpec.koopman(MapSpec.rotation(alpha))
        result = mild_mixing_probe(op, self.e1, self.e1, FSSet.from_generators(dens))
        self.assertLess(result.rigidity_gap, 0.1)
        self.assertAlmostEqual(result.max_abs, 1.0, places=12)
        self.assertAlmostEqual(result.base_pairing, 1.0)

    def test_probe_horizon(self):
        """Elements beyond the horizon are refused."""
        op = OperatorSpec.koopman(MapSpec.doubling())
        with self.assertRaises(RangeError):
            mild_mixing_probe(op, self.e1, self.e1, FSSet((100,), 1), horizon=50)


class TestPointwiseBounds(unittest.TestCase):

    def test_multiplication_operator_ratio(self):
        """|M_e^n f(x)| = 1 on the support, so the ratio is 1 / |support| = 32."""
        op = OperatorSpec.mult_op(CharacterMultiplier(1))
        f = StepObservable.indicator(0, Fraction(1, 32))
        report = pacb_ratio(op, [f], [Fraction(1, 64)], 64)
        self.assertAlmostEqual(report.ratio, 32.0)
        self.assertEqual(report.argmax, (0, 0))

    def test_zero_integral(self):
        """An observable with zero integral has no ratio."""
        op = OperatorSpec.mult_op(CharacterMultiplier(1))
        with self.assertRaises(ContractError):
            pacb_ratio(op, [StepObservable([0, 1], [0.0])], [0], 4)
        with self.assertRaises(ContractError):
            pacb_ratio(op, [], [0], 4)

    def test_sup_ratio_of_rotation(self):
        """Koopman operators preserve the sup of a character."""
        op = OperatorSpec.koopman(MapSpec.rotation(fixed_sqrt2_minus_1()))
        self.assertAlmostEqual(spacb_sup_ratio(op, Observable.character(1), [0, "1/3"], 32), 1.0)


class TestDyadicAverages(unittest.TestCase):

    def test_selected_count(self):
        """|B in [1, N]| for a few N."""
        self.assertEqual(selected_count(7), 4)
        self.assertEqual(selected_count(16), 5)
        self.assertEqual(selected_count(2047), 1364)

    def test_pairing_sequence(self):
        """The pairing is 1/2 exactly on B."""
        seq = dyadic_pairing_sequence(DYADIC_S, 20)
        self.assertEqual([n for n, p in enumerate(seq) if p], [4, 5, 6, 7, 16, 17, 18, 19])
        self.assertEqual(seq[4], Fraction(1, 2))

    def test_cesaro_average(self):
        """1364 selected steps below 2048."""
        self.assertEqual(dyadic_cesaro_average(DYADIC_S, 2048), Fraction(1364, 4096))

    def test_literal_and_counting_agree(self):
        """Switching from iteration to counting does not change the value."""
        full = dyadic_cesaro_average(DYADIC_S, 100, literal=100)
        split = dyadic_cesaro_average(DYADIC_S, 100, literal=10)
        self.assertEqual(full, split)
        self.assertEqual(full, Fraction(28, 100))

    def test_closed_forms(self):
        """Averages at 2^{2m+1} and 2^{2m+2} for both operators."""
        rows_s = dyadic_mean_ergodicity(DYADIC_S, 4)
        rows_t = dyadic_mean_ergodicity(DYADIC_T, 4)
        for rs, rt in zip(rows_s, rows_t):
            m = rs.m
            self.assertEqual(rs.avg_upper, Fraction(1, 3) - Fraction(1, 3 * 4 ** m))
            self.assertEqual(rs.avg_lower, Fraction(1, 6) - Fraction(1, 6 * 4 ** m))
            self.assertEqual((rs.avg_upper, rs.avg_lower), (rt.avg_upper, rt.avg_lower))

    def test_m_max_limit(self):
        """m_max lies in 1..12."""
        with self.assertRaises(ContractError):
            dyadic_mean_ergodicity(DYADIC_S, 13)
        with self.assertRaises(ContractError):
            dyadic_cesaro_average("koopman", 10)


if __name__ == '__main__':
    unittest.main()
