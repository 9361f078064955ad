import math
import unittest

import numpy as np

from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.errors import StructureConstantError, TruncationLossError
from leafwise.fourier.fourier_series import FourierSeries, random_series
from leafwise.lie.algebra_forms import (AlgebraValuedForm, canonical_form, gauge_transform, matrix_product,
                                        maurer_cartan_residual)
from leafwise.lie.chevalley_eilenberg import (ce_differential, cohomology_dims, first_cohomology_oracle,
                                              square_residual)
from leafwise.lie.lie_algebra import (LieAlgebra, abelian, ga, heisenberg, n_upper, random_nilpotent, sl2,
                                      validate)


class TestChevalleyEilenberg(unittest.TestCase):
    """Cohomology of the Chevalley-Eilenberg complex with trivial coefficients."""

    def test_abelian_cohomology_is_the_exterior_algebra(self):
        """Every differential vanishes on an abelian algebra: dim H^k = C(p, k)."""
        for p in range(1, 7):
            report = cohomology_dims(abelian(p))
            self.assertEqual(report.dims, [math.comb(p, k) for k in range(p + 1)])
            self.assertEqual(report.dims[1], first_cohomology_oracle(abelian(p)))

    def test_standard_algebras(self):
        """Heisenberg, ga and sl2 against dim g - dim [g, g]."""
        expected = {"heisenberg": ([1, 2, 2, 1], heisenberg()),
                    "ga": ([1, 1, 0], ga()),
                    "sl2": ([1, 0, 0, 1], sl2())}
        for name, (dims, L) in expected.items():
            report = cohomology_dims(L)
            self.assertEqual(report.dims, dims, name)
            self.assertEqual(report.dims[1], first_cohomology_oracle(L), name)
            self.assertEqual(report.euler_characteristic, 0, name)
            self.assertEqual(report.warnings, [], name)

    def test_heisenberg_differential_sign(self):
        """With [xi_1, xi_2] = xi_3 the dual form satisfies d alpha_3 = -alpha_1 ^ alpha_2."""
        D = ce_differential(heisenberg(), 1)
        np.testing.assert_array_equal(D, [[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

    def test_square_vanishes_on_random_nilpotent_algebras(self):
        """d o d = 0 up to round-off for 50 random nilpotent subalgebras."""
        rng = np.random.default_rng(99)
        for trial in range(50):
            L = random_nilpotent(int(rng.integers(3, 6)), rng)
            self.assertLessEqual(square_residual(L), 1e-12, f"trial {trial}")

    def test_first_cohomology_of_random_nilpotent_algebras(self):
        """dim H^1 from the complex equals dim g - dim [g, g] on 20 random nilpotent algebras."""
        rng = np.random.default_rng(7)
        for trial in range(20):
            L = random_nilpotent(int(rng.integers(3, 5)), rng)
            report = cohomology_dims(L)
            self.assertEqual(report.dims[1], first_cohomology_oracle(L), f"trial {trial}")
            self.assertEqual(report.dims[0], 1)
            self.assertEqual(sum((-1) ** k * d for k, d in enumerate(report.dims)), 0, f"trial {trial}")

    def test_nilpotent_upper_triangular(self):
        """n_4 has dimension 6 and H^1 of dimension 3."""
        L = n_upper(4)
        self.assertEqual(L.n, 6)
        self.assertEqual(cohomology_dims(L).dims[1], 3)

    def test_invalid_structure_constants(self):
        """Non-antisymmetric constants are reported and refused."""
        c = np.zeros((3, 3, 3))
        c[0, 1, 2] = 1.0
        report = validate(LieAlgebra(c))
        self.assertFalse(report.passed)
        self.assertEqual(report.violation, (1, 2, 3))
        with self.assertRaises(StructureConstantError):
            cohomology_dims(LieAlgebra(c))

    def test_json_indices_are_one_based(self):
        """to_json/from_json keep the structure constants of sl2."""
        data = sl2().to_json()
        self.assertIn({"i": 2, "j": 3, "k": 1, "val": 1.0}, data["c"])
        np.testing.assert_array_equal(LieAlgebra.from_json(data).c, sl2().c)

    def test_change_basis_preserves_cohomology(self):
        """Cohomology does not depend on the basis."""
        P = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 3.0]])
        L = heisenberg().change_basis(P)
        self.assertTrue(validate(L, tol=1e-10).passed)
        self.assertEqual(cohomology_dims(L).dims, [1, 2, 2, 1])
        self.assertEqual(heisenberg().homomorphism_defect(np.eye(3)), 0.0)


class TestGaugeTransform(unittest.TestCase):
    """Gauge action on Heisenberg-valued forms over the frame of T^2."""

    def setUp(self):
        self.V = ActionMatrix([[1, 0], [0, 1]])
        self.L = heisenberg()
        self.rng = np.random.default_rng(31)
        zero = FourierSeries.zero(2)
        one = FourierSeries.constant(2, 1.0)
        self.omega = AlgebraValuedForm.from_frame_values(self.V, [[one, zero, zero], [zero, zero, zero]])

    def group_element(self):
        one, zero = FourierSeries.constant(2, 1.0), FourierSeries.zero(2)
        x, y, z = (random_series(2, 1, 2, self.rng).scale(0.3) for _ in range(3))
        return [[one, x, z], [zero, one, y], [zero, zero, one]]

    def test_identity_gauge_is_exact(self):
        """b = I and Theta = I return the form unchanged."""
        result = gauge_transform(self.omega, np.eye(3).tolist(), None, self.L)
        self.assertIs(result.form, self.omega)
        self.assertEqual(result.truncation_loss, 0.0)

    def test_composition_law(self):
        """Gauging by b1 then b2 equals gauging by b1 b2."""
        b1, b2 = self.group_element(), self.group_element()
        step = gauge_transform(gauge_transform(self.omega, b1, None, self.L).form, b2, None, self.L)
        direct = gauge_transform(self.omega, matrix_product(b1, b2), None, self.L)
        self.assertLessEqual(step.form.max_distance(direct.form), 1e-9)
        self.assertLessEqual(direct.algebra_defect, 1e-12)

    def test_gauge_preserves_flatness(self):
        """A flat form stays flat up to the recorded truncation loss."""
        self.assertEqual(maurer_cartan_residual(self.omega, self.L), 0.0)
        result = gauge_transform(self.omega, self.group_element(), None, self.L)
        self.assertLessEqual(maurer_cartan_residual(result.form, self.L), result.truncation_loss + 1e-10)

    def test_truncation_loss_is_enforced(self):
        """A truncation below the product radius drops modes and is refused."""
        with self.assertRaises(TruncationLossError):
            gauge_transform(self.omega, self.group_element(), None, self.L, truncation=1)

    def test_canonical_form_is_flat(self):
        """The canonical form of a linear action solves the Maurer-Cartan equation exactly."""
        V = ActionMatrix([[1.0, 0.0, (1 + 5 ** 0.5) / 2], [0.0, 1.0, 2 ** 0.5]])
        omega, algebra = canonical_form(V)
        self.assertEqual(algebra.n, 2)
        self.assertEqual(maurer_cartan_residual(omega, algebra), 0.0)
        self.assertEqual([s.mean() for s in omega.value_on(1)], [0.0, 1.0])


if __name__ == '__main__':
    unittest.main()
