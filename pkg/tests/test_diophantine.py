import unittest
from fractions import Fraction

import numpy as np

from leafwise.config.config import apply_settings
from leafwise.diophantine.action_matrix import ActionMatrix, as_exact_rational
from leafwise.diophantine.continued_fractions import (best_approximations, continued_fraction, factorial_schedule,
                                                      liouville_vector, partial_quotient_bound, partial_quotients)
from leafwise.diophantine.small_divisors import box_modes, estimate_type, resonance_lattice, small_divisors
from leafwise.errors import BudgetExceededError, RankDeficientError, RepresentabilityError

PHI = (1 + 5 ** 0.5) / 2


class TestActionMatrix(unittest.TestCase):

    def test_rational_entries_are_certified(self):
        """Strings, integers and doubles of small-denominator rationals are exact."""
        self.assertEqual(as_exact_rational("1/3"), Fraction(1, 3))
        self.assertEqual(as_exact_rational(0.25), Fraction(1, 4))
        self.assertIsNone(as_exact_rational(PHI))
        V = ActionMatrix([[1, "1/3"]])
        Q, L = V.integer_form()
        self.assertEqual(L, 3)
        self.assertEqual([int(x) for x in Q[0]], [3, 1])
        self.assertFalse(ActionMatrix([[1.0, PHI]]).is_rational)

    def test_dependent_rows_rejected(self):
        """Linearly dependent generating vectors do not define a locally free action."""
        with self.assertRaises(RankDeficientError):
            ActionMatrix([[1.0, 2.0], [2.0, 4.0]])
        with self.assertRaises(RankDeficientError):
            ActionMatrix([[1.0], [2.0]])


class TestSmallDivisors(unittest.TestCase):
    """Divisor enumeration and type estimation."""

    def tearDown(self):
        apply_settings()

    def test_box_modes_excludes_zero(self):
        """The box of radius M holds (2M+1)^N - 1 nonzero modes."""
        modes = box_modes(2, 3)
        self.assertEqual(len(modes), 48)
        self.assertFalse(np.any(np.all(modes == 0, axis=1)))

    def test_resonance_lattice_of_rational_flow(self):
        """v = (1, 1) is resonant exactly along multiples of (1, -1)."""
        V = ActionMatrix.flow([1, 1])
        self.assertEqual(resonance_lattice(V, 2), [(-2, 2), (-1, 1), (1, -1), (2, -2)])

    def test_irrational_flow_has_no_resonances(self):
        """The golden flow has no resonant mode in a finite box."""
        table = small_divisors(ActionMatrix.flow([1.0, PHI]), 20)
        self.assertEqual(table.resonant_modes(), [])
        self.assertGreater(table.deltas.min(), 0.0)

    def test_golden_type_estimate(self):
        """(1, phi) is badly approximable: tau close to 1 with a constant bounded below."""
        report = estimate_type(ActionMatrix.flow([1.0, PHI]), 10 ** 4)
        self.assertGreaterEqual(report.tau_estimate, 0.8)
        self.assertLessEqual(report.tau_estimate, 1.2)
        self.assertGreaterEqual(report.c_estimate, 0.2)
        self.assertEqual(report.resonances, [])
        self.assertFalse(report.liouville_like)
        self.assertFalse(report.certified_rational)
        self.assertEqual(report.dirichlet_exponent, 1.0)

    def test_rational_type_estimate_reports_resonances(self):
        """Resonant candidates of a rational vector are certified and left out of the fit."""
        report = estimate_type(ActionMatrix.flow([1, "1/2"]), 16)
        self.assertTrue(report.certified_rational)
        self.assertIn((-1, 2), report.resonances)
        self.assertGreater(report.c_estimate, 0.0)

    def test_type_estimate_needs_radius(self):
        """Radii below 8 leave too few dyadic shells."""
        with self.assertRaises(ValueError):
            estimate_type(ActionMatrix.flow([1.0, PHI]), 4)

    def test_budget_guard(self):
        """A box larger than the mode budget is refused before enumeration."""
        with self.assertRaises(BudgetExceededError):
            small_divisors(ActionMatrix.flow([1.0, PHI, 2 ** 0.5]), 50, budget=1000)
        apply_settings(overrides={"diophantine": {"mode_budget": 10}})
        with self.assertRaises(BudgetExceededError):
            resonance_lattice(ActionMatrix.flow([1, 1]), 2)


class TestContinuedFractions(unittest.TestCase):

    def test_golden_convergents_are_fibonacci_ratios(self):
        """phi - 1 = [0; 1, 1, 1, ...]."""
        convergents = continued_fraction(PHI - 1, 8)
        fib = [1, 1, 2, 3, 5, 8, 13, 21, 34]
        self.assertEqual(convergents, [Fraction(fib[k], fib[k + 1]) for k in range(8)])
        self.assertEqual(partial_quotient_bound(PHI - 1, 20), 1)

    def test_rational_expansion_terminates(self):
        """A rational has a finite expansion."""
        self.assertEqual(partial_quotients(Fraction(7, 3), 10), [2, 3])
        self.assertEqual(continued_fraction(Fraction(1, 3), 5), [Fraction(1, 3)])

    def test_best_approximations_of_sqrt2(self):
        """Convergents of sqrt 2 have Pell denominators."""
        approximations = best_approximations(2 ** 0.5, 100)
        self.assertEqual([q for _, q in approximations], [1, 2, 5, 12, 29, 70])

    def test_liouville_vector(self):
        """Three factorial terms fit in a double; the sixth does not."""
        schedule = factorial_schedule(6)
        self.assertEqual(schedule, [1, 2, 6, 24, 120, 720])
        self.assertEqual(liouville_vector(schedule[:3]), 0.110001)
        exact = liouville_vector(schedule, exact=True)
        self.assertEqual(exact.denominator, 10 ** 720)
        with self.assertRaises(RepresentabilityError):
            liouville_vector(schedule)
        with self.assertRaises(ValueError):
            liouville_vector([3, 2])


if __name__ == '__main__':
    unittest.main()
