"""
Tests for operator variants, pointwise orbits and the dyadic mass maps.
"""

import unittest
from fractions import Fraction

import numpy as np

from wwlab_core import (
    EXACT_RATIONAL,
    FIXED_POINT_128,
    FLOAT64,
    ContractError,
    RangeError,
    ResourceError,
    fixed_sqrt2_minus_1,
)
from wwlab_operators import (
    DYADIC_S,
    DYADIC_T,
    CharacterMultiplier,
    DyadicMass,
    MatrixMultiplier,
    OperatorSpec,
    batch_orbit,
    dyadic_apply,
    dyadic_density,
    dyadic_iterate,
    dyadic_pairing,
    exact_pairing,
    in_selection_set,
    index_position,
    index_sequence,
    non_contractive_multiplier,
    orbit_model,
    orbit_values,
    selection_predicate,
    twisted_u_closed_form,
    ucalpha_polynomial_weight,
)
from wwlab_systems import BernoulliState, MapSpec, Observable, sample_points


class TestOperatorSpec(unittest.TestCase):

    def test_missing_parts(self):
        """Variants refuse construction without their map, multiplier or dual."""
        with self.assertRaises(ContractError):
            OperatorSpec("koopman")
        with self.assertRaises(ContractError):
            OperatorSpec("mult-koopman", system=MapSpec.rotation("1/3"))
        with self.assertRaises(ContractError):
            OperatorSpec("pairing-koopman", system=MapSpec.rotation("1/3"))
        with self.assertRaises(ContractError):
            OperatorSpec("shift")

    def test_dyadic_has_no_pointwise_orbit(self):
        """orbit_values directs dyadic variants to the mass maps."""
        with self.assertRaises(ContractError):
            orbit_values(OperatorSpec.dyadic_s(), Observable.character(1), 0, 4)

    def test_multiplier_dimension_must_match(self):
        """A scalar C^1 multiplier cannot act on a C^2 observable."""
        op = OperatorSpec.mult_op(CharacterMultiplier(1, dim=1))
        with self.assertRaises(ContractError):
            orbit_values(op, Observable.character(1, dim=2), 0, 4)


class TestMultipliers(unittest.TestCase):

    def test_non_contractive_values(self):
        """2i, 1/(2i) and 1 on the three pieces."""
        F = non_contractive_multiplier("1/4")
        np.testing.assert_allclose(F.at([0.1, 0.3, 0.6]), [2j, -0.5j, 1.0])
        self.assertEqual(F.bound, 2.0)

    def test_non_contractive_needs_small_alpha(self):
        """alpha must lie strictly inside (0, 1/2)."""
        with self.assertRaises(ContractError):
            non_contractive_multiplier("1/2")
        with self.assertRaises(ContractError):
            non_contractive_multiplier(0)

    def test_non_contractive_cumulative_modulus(self):
        """Every visit to [0, a) is followed by one to [a, 2a), so |F_n| only takes 1/2, 1 and 2."""
        op = OperatorSpec.non_contractive_s(fixed_sqrt2_minus_1())
        one = Observable.constant(1.0)
        seen = set()
        for x in [0, "1/2"] + list(sample_points(3, 6)):
            norms = orbit_values(op, one, x, 2000).norms()
            self.assertTrue(np.all(np.isclose(norms, 0.5) | np.isclose(norms, 1.0) | np.isclose(norms, 2.0)))
            seen.update(float(r) for r in np.round(norms, 12))
        self.assertEqual(seen, {0.5, 1.0, 2.0})
        self.assertAlmostEqual(orbit_values(op, one, 0, 1).norms()[0], 2.0)
        self.assertAlmostEqual(orbit_values(op, one, "1/2", 1).norms()[0], 0.5)

    def test_matrix_bound_is_checked(self):
        """A multiplier exceeding its declared bound is rejected."""
        with self.assertRaises(ContractError):
            MatrixMultiplier(lambda xs: 2 * np.broadcast_to(np.eye(2), (xs.size, 2, 2)), 2, 1.0)

    def test_matrix_orbit_norms(self):
        """Scaled rotation matrices shrink norms by exactly the radius per step."""
        op = OperatorSpec.mult_koopman(MatrixMultiplier.rotation(0.9), MapSpec.rotation(fixed_sqrt2_minus_1()))
        orbit = orbit_values(op, Observable.constant(1.0, dim=2), 0, 6)
        expected = 0.9 ** np.arange(1, 7) * np.sqrt(2)
        np.testing.assert_allclose(orbit.norms(), expected, rtol=1e-12)


class TestPointwiseOrbits(unittest.TestCase):

    def test_koopman_rotation(self):
        """Koopman orbit of e(x) under rotation by 1/4."""
        op = OperatorSpec.koopman(MapSpec.rotation("1/4"))
        orbit = orbit_values(op, Observable.character(1), 0, 4)
        np.testing.assert_allclose(orbit.values[:, 0], [1j, -1, -1j, 1], atol=1e-12)

    def test_koopman_identity_repeats(self):
        """The identity map gives a constant orbit."""
        op = OperatorSpec.koopman(MapSpec.identity())
        orbit = orbit_values(op, Observable.character(1), "1/4", 3)
        np.testing.assert_allclose(orbit.values[:, 0], [1j] * 3, atol=1e-12)

    def test_mult_op_powers(self):
        """M_e^n f(x) = e(nx) f(x)."""
        op = OperatorSpec.mult_op(CharacterMultiplier(1))
        orbit = orbit_values(op, Observable.constant(1.0), "1/8", 4)
        expected = np.exp(2j * np.pi * np.arange(1, 5) / 8)
        np.testing.assert_allclose(orbit.values[:, 0], expected, atol=1e-12)

    def test_twisted_u_generic_path(self):
        """A non-unit coefficient takes the cumulative-phase route and scales linearly."""
        op = OperatorSpec.twisted_u(fixed_sqrt2_minus_1())
        x = 12345678901234567890
        orbit = orbit_values(op, Observable.character(1, amplitude=2.0), x, 50)
        closed = twisted_u_closed_form(x, fixed_sqrt2_minus_1(), 50)
        np.testing.assert_allclose(orbit.values[:, 0], 2 * closed, atol=1e-9)

    def test_ucalpha_weight_cancels_orbit(self):
        """The polynomial weight times the orbit is identically 1."""
        alpha = fixed_sqrt2_minus_1()
        op = OperatorSpec.twisted_u(alpha)
        orbit = orbit_values(op, Observable.character(1), "1/3", 200)
        products = ucalpha_polynomial_weight("1/3", alpha, 200) * orbit.values[:, 0]
        np.testing.assert_allclose(products, np.ones(200), atol=1e-9)

    def test_pairing_koopman_constant(self):
        """For constant g = 1/2 and dual 1 the n-th iterate is (1/2)^(2^n)."""
        op = OperatorSpec.pairing_koopman(Observable.constant(1.0), MapSpec.rotation("1/4"))
        orbit = orbit_values(op, Observable.constant(0.5), 0, 4)
        np.testing.assert_allclose(orbit.values[:, 0].real, [0.5 ** 2, 0.5 ** 4, 0.5 ** 8, 0.5 ** 16])

    def test_pairing_koopman_cap(self):
        """The quadratic orbit refuses long horizons."""
        op = OperatorSpec.pairing_koopman(Observable.constant(1.0), MapSpec.rotation("1/4"))
        with self.assertRaises(ResourceError):
            orbit_values(op, Observable.constant(0.5), 0, 4097)

    def test_doubling_orbit_from_state(self):
        """Koopman on the doubling map reads the Bernoulli stream."""
        op = OperatorSpec.koopman(MapSpec.doubling())
        orbit = orbit_values(op, Observable.character(1), BernoulliState(pattern=(1, 0)), 2)
        np.testing.assert_allclose(orbit.values[:, 0], np.exp(2j * np.pi * np.array([1 / 3, 2 / 3])),
                                   atol=1e-12)
        with self.assertRaises(ContractError):
            orbit_values(op, Observable.character(1), 0, 2)

    def test_batch_agrees_with_pointwise(self):
        """Batched float orbits match the fixed-point orbits at dyadic points."""
        op = OperatorSpec.mult_koopman(CharacterMultiplier(1), MapSpec.rotation("1/8"))
        f = Observable.character(2)
        batch = batch_orbit(op, f, np.array([0.0, 0.25]), 5)
        self.assertEqual(batch.shape, (2, 6, 1))
        for i, x in enumerate([0.0, 0.25]):
            np.testing.assert_allclose(batch[i, 1:, 0], orbit_values(op, f, x, 5).values[:, 0], atol=1e-10)
            np.testing.assert_allclose(batch[i, 0, 0], f.evaluate([x])[0, 0], atol=1e-12)


class TestOrbitModels(unittest.TestCase):

    def test_native_models(self):
        """Rotations and multiplication operators are fixed-point; the doubling map is float64."""
        rotation = MapSpec.rotation(fixed_sqrt2_minus_1())
        self.assertEqual(orbit_model(OperatorSpec.koopman(rotation)), FIXED_POINT_128)
        self.assertEqual(orbit_model(OperatorSpec.mult_op(CharacterMultiplier(1))), FIXED_POINT_128)
        self.assertEqual(orbit_model(OperatorSpec.koopman(MapSpec.doubling())), FLOAT64)
        self.assertEqual(orbit_model(OperatorSpec.koopman(MapSpec.doubling()), FLOAT64), FLOAT64)

    def test_unavailable_models(self):
        """Combinations with no orbit in the requested model are refused."""
        alpha = fixed_sqrt2_minus_1()
        with self.assertRaises(ContractError):
            orbit_model(OperatorSpec.koopman(MapSpec.doubling()), FIXED_POINT_128)
        with self.assertRaises(ContractError):
            orbit_model(OperatorSpec.twisted_u(alpha), FLOAT64)
        with self.assertRaises(ContractError):
            orbit_model(OperatorSpec.koopman(MapSpec.rotation(alpha)), EXACT_RATIONAL)
        with self.assertRaises(ContractError):
            orbit_model(OperatorSpec.dyadic_t())

    def test_float_rotation_orbits_track_fixed_point(self):
        """The float64 rotation stays within 1e-9 of the fixed-point orbit."""
        alpha = fixed_sqrt2_minus_1()
        f = Observable.character(3)
        for op in (OperatorSpec.koopman(MapSpec.rotation(alpha)),
                   OperatorSpec.mult_koopman(CharacterMultiplier(1), MapSpec.rotation(alpha))):
            exact = orbit_values(op, f, "1/7", 1024)
            rounded = orbit_values(op, f, "1/7", 1024, FLOAT64)
            self.assertEqual(exact.exactness, FIXED_POINT_128)
            self.assertEqual(rounded.exactness, FLOAT64)
            np.testing.assert_allclose(rounded.values, exact.values, atol=1e-9)


class TestExactPairings(unittest.TestCase):

    def setUp(self):
        self.e1 = Observable.character(1)

    def test_rotation(self):
        """<e(x + 1/4), e(x)> = i."""
        op = OperatorSpec.koopman(MapSpec.rotation("1/4"))
        self.assertAlmostEqual(exact_pairing(op, self.e1, self.e1, 1), 1j)

    def test_doubling(self):
        """e(x) composed with doubling is e(2x)."""
        op = OperatorSpec.koopman(MapSpec.doubling())
        self.assertAlmostEqual(exact_pairing(op, self.e1, Observable.character(2), 1), 1)
        self.assertAlmostEqual(exact_pairing(op, self.e1, self.e1, 1), 0)
        self.assertAlmostEqual(exact_pairing(op, self.e1, self.e1, 0), 1)

    def test_mult_op(self):
        """M_e^3 1 = e(3x)."""
        op = OperatorSpec.mult_op(CharacterMultiplier(1))
        self.assertAlmostEqual(exact_pairing(op, Observable.constant(1.0), Observable.character(3), 3), 1)

    def test_twisted_u(self):
        """U^3 e(x) = e(6 alpha + 4x), so the pairing with e(4x) is e(3/4)."""
        op = OperatorSpec.twisted_u("1/8")
        self.assertAlmostEqual(exact_pairing(op, self.e1, Observable.character(4), 3), -1j)

    def test_step_multiplier_has_no_exact_pairing(self):
        """Non-character multipliers fall outside the exact path."""
        op = OperatorSpec.non_contractive_s("1/4")
        with self.assertRaises(ContractError):
            exact_pairing(op, self.e1, self.e1, 1)
        with self.assertRaises(RangeError):
            exact_pairing(OperatorSpec.koopman(MapSpec.identity()), self.e1, self.e1, -1)


class TestDyadicMaps(unittest.TestCase):

    def test_masses_are_merged(self):
        """Repeated indices are summed and zero masses dropped."""
        m = DyadicMass(((1, Fraction(1, 4)), (1, Fraction(1, 4)), (2, 0)))
        self.assertEqual(m.masses, ((1, Fraction(1, 2)),))
        with self.assertRaises(ContractError):
            DyadicMass(((-1, 1),))

    def test_maps_preserve_total_mass(self):
        """S and T relocate masses without changing their sum."""
        m = DyadicMass.from_dict({0: Fraction(1, 2), 1: Fraction(1, 4), 3: Fraction(1, 8)})
        for variant in (DYADIC_S, DYADIC_T):
            current = m
            for _ in range(6):
                current = dyadic_apply(variant, current)
                self.assertEqual(sum(mass for _, mass in current.masses), Fraction(7, 8))
                self.assertEqual(len(current.masses), 3)

    def test_shift_moves_mass(self):
        """S moves I_n to I_{n+1} and T moves it to I_{(n+1)^2}."""
        m = DyadicMass.indicator_upper_half()
        self.assertEqual(dyadic_apply(DYADIC_S, m).as_dict(), {1: Fraction(1, 2)})
        self.assertEqual(dyadic_iterate(DYADIC_T, m, 2).as_dict(), {4: Fraction(1, 2)})
        self.assertEqual(dyadic_iterate(DYADIC_S, m, 5).total(), Fraction(1, 2))

    def test_density_and_pairing(self):
        """Step value is the mass over the interval length."""
        m = DyadicMass.interval_indicator(3)
        self.assertEqual(dyadic_density(m, 3), 1)
        self.assertEqual(dyadic_pairing(m, lambda k: k == 3), Fraction(1, 16))
        self.assertEqual(dyadic_pairing(m, lambda k: k != 3), 0)

    def test_index_sequences(self):
        """a_n = n for S and 1, 4, 25, 676 for T."""
        self.assertEqual([index_sequence(DYADIC_T, n) for n in range(1, 5)], [1, 4, 25, 676])
        self.assertEqual(index_sequence(DYADIC_S, 7), 7)
        self.assertEqual(index_position(DYADIC_T, 25), 3)
        self.assertIsNone(index_position(DYADIC_T, 5))
        with self.assertRaises(ResourceError):
            index_sequence(DYADIC_T, 25)

    def test_selection_set(self):
        """B is the union of [4^m, 2 * 4^m) over m >= 1."""
        selected = [n for n in range(1, 40) if in_selection_set(n)]
        self.assertEqual(selected, [4, 5, 6, 7, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27,
                                    28, 29, 30, 31])

    def test_selection_predicates(self):
        """Selection follows positions in the index sequence."""
        s_pred = selection_predicate(DYADIC_S)
        t_pred = selection_predicate(DYADIC_T)
        self.assertTrue(s_pred(4))
        self.assertFalse(s_pred(8))
        self.assertTrue(t_pred(676))
        self.assertFalse(t_pred(25))
        self.assertFalse(t_pred(26))


if __name__ == '__main__':
    unittest.main()
