import unittest

import numpy as np

from leafwise.circle.circle_map import (CircleMap, CommutingFamily, arnold_map, commuting_check, conjugate_by,
                                        conjugate_forward, inverse_on_grid, rigid_rotation)
from leafwise.circle.conjugacy import ConjugacyStatus, kam_iterate, linearized_conjugacy
from leafwise.circle.rotation import check_moser_condition, chordal_distance, family_rotation_numbers, rotation_number
from leafwise.config.config import apply_settings
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.diophantine.small_divisors import small_divisors
from leafwise.errors import OrientationError
from leafwise.fourier.fourier_series import FourierSeries, random_series

GOLDEN = (5 ** 0.5 - 1) / 2


def small_diffeo(rng, amplitude, radius=3):
    """id + eta with eta a random trigonometric polynomial scaled to the given amplitude."""
    eta = random_series(1, radius, radius, rng, decay=1.0)
    return CircleMap(0.0, eta.scale(amplitude / eta.max_abs()))


class TestCircleMaps(unittest.TestCase):

    def test_orientation_is_checked(self):
        """A lift with negative derivative somewhere is refused."""
        u = FourierSeries.from_dict(1, {(1,): 0.25, (-1,): 0.25}, real=True)
        with self.assertRaises(OrientationError):
            CircleMap(0.1, u)

    def test_inverse_on_grid(self):
        """f(f^{-1}(y)) = y to machine precision."""
        f = arnold_map(0.3, 0.8)
        ys = np.linspace(-1.0, 2.0, 301)
        np.testing.assert_allclose(f.lift(inverse_on_grid(f, ys)), ys, atol=1e-13)

    def test_conjugations_are_inverse(self):
        """h^{-1} (h f h^{-1}) h gives back f."""
        rng = np.random.default_rng(8)
        f = arnold_map(0.41, 0.3)
        h = small_diffeo(rng, 0.01)
        back = conjugate_by(conjugate_forward(f, h), h)
        self.assertEqual(back.drift, f.drift)
        self.assertLessEqual((back.u - f.u).max_abs(), 1e-12)

    def test_commuting_check_reports_the_defect(self):
        """Rotations commute with each other and with their conjugates; Arnold maps do not."""
        ok, defect = commuting_check(rigid_rotation(0.3), rigid_rotation(GOLDEN))
        self.assertTrue(ok)
        self.assertLessEqual(defect, 1e-15)
        f = arnold_map(0.3, 0.5)
        ok, defect = commuting_check(f, arnold_map(0.2, 0.3))
        self.assertFalse(ok)
        self.assertGreater(defect, 1e-3)

    def test_non_commuting_family_rejected(self):
        """Two Arnold maps with different nonlinearities do not commute."""
        with self.assertRaises(ValueError):
            CommutingFamily([arnold_map(0.3, 0.5), arnold_map(0.2, 0.3)])

    def test_json_codec(self):
        """drift and periodic part survive to_json/from_json."""
        f = arnold_map(0.25, 0.1)
        g = CircleMap.from_json(f.to_json())
        self.assertEqual(g.drift, 0.25)
        self.assertEqual(g.u.to_dict(), f.u.to_dict())


class TestRotationNumber(unittest.TestCase):
    """Rotation numbers with the 1/n enclosure of monotone lifts."""

    def test_rigid_rotation_is_exact(self):
        """r_theta has rotation number theta mod 1."""
        for theta in (0.0, 0.25, GOLDEN, 1.75, -0.1):
            estimate = rotation_number(rigid_rotation(theta), 1000)
            self.assertEqual(estimate.tau, theta % 1.0)
            self.assertEqual(estimate.error_bound, 1e-3)
            self.assertTrue(estimate.contains(theta))

    def test_conjugacy_invariance(self):
        """tau(h^{-1} f h) = tau(f) within 2/n for random small diffeomorphisms h."""
        rng = np.random.default_rng(41)
        n = 1000
        f = arnold_map(0.3, 0.5)
        reference = rotation_number(f, n)
        for trial in range(50):
            g = conjugate_by(f, small_diffeo(rng, 0.002))
            estimate = rotation_number(g, n)
            self.assertLessEqual(abs(estimate.lift_average - reference.lift_average), 2.0 / n, f"trial {trial}")

    def test_arnold_map_against_long_orbit(self):
        """10^5 iterations agree with a 10^6-step orbit."""
        f = arnold_map(0.3, 0.5)
        oracle = rotation_number(f, 10 ** 6)
        estimate = rotation_number(f, 10 ** 5)
        self.assertLessEqual(abs(estimate.lift_average - oracle.lift_average), 1e-5 + 1e-6)

    def test_enclosure_on_random_arnold_maps(self):
        """The 1/n enclosure contains a 20000-step orbit average for 50 random Arnold maps."""
        rng = np.random.default_rng(50)
        n, n_oracle = 1000, 20000
        for trial in range(50):
            f = arnold_map(float(rng.random()), float(rng.uniform(0.0, 0.9)))
            estimate = rotation_number(f, n)
            oracle = rotation_number(f, n_oracle)
            self.assertLessEqual(abs(estimate.lift_average - oracle.lift_average), 1.0 / n + 1.0 / n_oracle,
                                 f"trial {trial}")

    def test_refinement_is_in_the_enclosure(self):
        """A mode-locked map is refined to its rational rotation number."""
        u = FourierSeries.from_dict(1, {(2,): 0.005, (-2,): 0.005}, real=True)
        estimate = rotation_number(CircleMap(0.5, u), 20000, refine=True)
        self.assertEqual(str(estimate.refined), "1/2")

    def test_family_rotation_numbers(self):
        """Each map of a commuting family gets its own estimate."""
        h = small_diffeo(np.random.default_rng(4), 0.01)
        family = CommutingFamily([conjugate_forward(rigid_rotation(a), h) for a in (GOLDEN, 2 ** 0.5 - 1)])
        estimates = family_rotation_numbers(family, 5000)
        self.assertTrue(estimates[0].contains(GOLDEN))
        self.assertTrue(estimates[1].contains(2 ** 0.5 - 1))


class TestMoserCondition(unittest.TestCase):

    def test_chordal_distance_is_exact_for_rationals(self):
        """|exp(2 pi i m / 4) - 1| vanishes at multiples of 4."""
        D = chordal_distance(np.arange(1, 9), 0.25)
        self.assertEqual(D[3], 0.0)
        self.assertEqual(D[7], 0.0)
        self.assertAlmostEqual(D[1], 2.0)

    def test_quarter_rotation_fails_at_four(self):
        """tau = 1/4 is resonant first at m = 4."""
        report = check_moser_condition([0.25], 16, 1.0)
        self.assertFalse(report.passed)
        self.assertEqual(report.argmin, 4)
        self.assertEqual(report.minimum, 0.0)
        self.assertEqual(report.resonances, [4, 8, 12, 16])

    def test_golden_rotation_passes(self):
        """The golden rotation number stays bounded away from resonance at exponent 1."""
        report = check_moser_condition([GOLDEN], 1000, 1.0)
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.minimum, 1.0)
        self.assertEqual([j for j, *_ in report.shells], list(range(10)))

    def test_single_map_agrees_with_the_divisor_scan(self):
        """For p = 1, D(m) = 2 sin(pi min_k |k + m tau|) with the minimum read off small_divisors of (1, tau)."""
        rng = np.random.default_rng(20)
        M = 64
        m = np.arange(1, M + 1)
        for trial in range(20):
            tau = float(rng.random())
            table = small_divisors(ActionMatrix.flow([1.0, tau]), M)
            nearest = np.array([table.deltas[table.modes[:, 1] == k].min() for k in m])
            np.testing.assert_allclose(chordal_distance(m, tau), 2 * np.sin(np.pi * nearest), atol=1e-12)
            report = check_moser_condition([tau], M, 1.0)
            self.assertAlmostEqual(report.minimum, float((2 * np.sin(np.pi * nearest) * m).min()), delta=1e-10)

    def test_simultaneous_condition_takes_the_best_map(self):
        """A resonant tau is rescued by a Diophantine partner."""
        report = check_moser_condition([0.25, GOLDEN], 64, 1.0)
        self.assertTrue(report.passed)
        self.assertEqual(report.resonances, [])


class TestConjugacy(unittest.TestCase):
    """Linearised conjugacy and the diagnostic Newton loop."""

    def setUp(self):
        apply_settings(overrides={"circle": {"rotation_iters": 20000}})

    def tearDown(self):
        apply_settings()

    def test_linearized_conjugacy_of_a_rotation_family(self):
        """Maps conjugate to rotations give a consistent first-order h."""
        h = small_diffeo(np.random.default_rng(12), 1e-4)
        alphas = [GOLDEN, 2 ** 0.5 - 1]
        family = CommutingFamily([conjugate_forward(rigid_rotation(a), h) for a in alphas])
        report = linearized_conjugacy(family, alphas)
        self.assertEqual(report.status, ConjugacyStatus.SOLVED)
        self.assertLess(report.consistency_residual, 1e-6)
        self.assertEqual(report.h.mean(), 0)

    def test_kam_reduces_the_residual(self):
        """Three Newton steps shrink the rotation residual tenfold in at least 9 of 10 trials."""
        rng = np.random.default_rng(1234)
        successes = 0
        for _ in range(10):
            h0 = small_diffeo(rng, 1e-3)
            family = CommutingFamily([conjugate_forward(rigid_rotation(GOLDEN), h0)])
            report = kam_iterate(family, 3, alphas=[GOLDEN])
            if report.steps[-1].residual * 10 <= report.steps[0].residual:
                successes += 1
        self.assertGreaterEqual(successes, 9)

    def test_resonant_target_is_obstructed(self):
        """A period-two orbit with a mode-2 perturbation cannot be linearised at tau = 1/2."""
        u = FourierSeries.from_dict(1, {(2,): 0.005, (-2,): 0.005}, real=True)
        report = kam_iterate(CommutingFamily([CircleMap(0.5, u)]), 3, alphas=[0.5])
        self.assertEqual(report.status, "obstructed")
        self.assertIn("resonant", report.diagnostic)
        self.assertEqual(len(report.steps), 1)

    def test_target_outside_enclosure_rejected(self):
        """alpha must be compatible with the measured rotation number."""
        with self.assertRaises(ValueError):
            kam_iterate(CommutingFamily([rigid_rotation(0.3)]), 2, alphas=[0.4])

    def test_rigid_family_is_already_converged(self):
        """Rotations need no correction."""
        report = kam_iterate(CommutingFamily([rigid_rotation(GOLDEN)]), 3)
        self.assertEqual(report.status, "converged")


if __name__ == '__main__':
    unittest.main()
