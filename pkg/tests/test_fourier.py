import os
import shutil
import tempfile
import unittest

import numpy as np
import numpy.testing as npt

from leafwise.config.config import apply_settings
from leafwise.errors import AliasingError, DimensionMismatchError
from leafwise.fourier.fourier_io import load_series, save_series, series_from_json, series_to_json
from leafwise.fourier.fourier_series import (FourierSeries, GridSamples, decay_diagnostic, directional_derivative,
                                             evaluate, from_samples, multiply, random_series, sample,
                                             sup_norm_estimate)


def cosine(dims=1, axis=0, amplitude=1.0):
    m = [0] * dims
    m[axis] = 1
    return FourierSeries.from_dict(dims, {tuple(m): amplitude / 2, tuple(-x for x in m): amplitude / 2}, real=True)


class TestFourierSeries(unittest.TestCase):
    """Sparse Fourier series on T^N."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        apply_settings()
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_canonical_form_merges_duplicates_and_drops_zeros(self):
        """Duplicate modes are summed, exact zeros removed, modes sorted."""
        s = FourierSeries(2, [[1, 0], [0, 1], [1, 0], [2, 2]], [1.0, 2.0, 3.0, 0.0])
        self.assertEqual(len(s), 2)
        self.assertEqual(s.coeff((1, 0)), 4.0)
        self.assertEqual(s[(0, 1)], 2.0)
        self.assertNotIn((2, 2), s)
        self.assertEqual([m for m, _ in s.items()], [(0, 1), (1, 0)])

    def test_real_flag_detected_from_hermitian_symmetry(self):
        """from_dict without a flag recognises real-valued data."""
        real = FourierSeries.from_dict(1, {(1,): 1 + 2j, (-1,): 1 - 2j})
        complex_ = FourierSeries.from_dict(1, {(1,): 1 + 2j})
        self.assertTrue(real.real)
        self.assertFalse(complex_.real)
        with self.assertRaises(ValueError):
            FourierSeries.from_dict(1, {(1,): 1.0}, real=True)

    def test_evaluate_cosine(self):
        """cos(2 pi x_1) evaluates to 1 at the origin and 0 at a quarter period."""
        s = cosine(dims=2)
        self.assertAlmostEqual(evaluate(s, [0.0, 0.3]), 1.0, places=14)
        self.assertAlmostEqual(evaluate(s, [0.25, 0.7]), 0.0, places=14)
        values = evaluate(s, np.array([[0.0, 0.0], [0.5, 0.0]]))
        npt.assert_allclose(values, [1.0, -1.0], atol=1e-14)

    def test_sample_then_reexpand_recovers_band_limited_series(self):
        """Grid samples at resolution >= 2M+1 determine a series of radius M."""
        rng = np.random.default_rng(7)
        s = random_series(2, 3, 8, rng)
        back = from_samples(sample(s, 9), 3)
        self.assertTrue(back.real)
        self.assertLess((back - s).max_abs(), 1e-12)

    def test_from_samples_rejects_aliasing_resolution(self):
        """A grid with fewer than 2M+1 samples per axis cannot resolve radius M."""
        g = GridSamples(1, (8,), np.zeros(8))
        with self.assertRaises(AliasingError):
            from_samples(g, 4)

    def test_directional_derivative_multiplies_by_divisor(self):
        """X_v e_m = 2 pi i <m, v> e_m."""
        s = FourierSeries.from_dict(2, {(1, 2): 0.5, (-1, -2): 0.5}, real=True)
        d = directional_derivative(s, [1.0, 0.5])
        self.assertAlmostEqual(d.coeff((1, 2)), 2j * np.pi * 2.0 * 0.5)
        self.assertTrue(d.real)
        with self.assertRaises(DimensionMismatchError):
            directional_derivative(s, [1.0])

    def test_multiply_direct_and_fft_paths_agree(self):
        """The convolution and the grid product give the same coefficients."""
        rng = np.random.default_rng(11)
        a = random_series(2, 4, 10, rng)
        b = random_series(2, 3, 10, rng)
        direct = multiply(a, b)
        apply_settings(overrides={"fourier": {"direct_product_limit": 0}})
        fft = multiply(a, b)
        self.assertEqual(fft.radius, 7)
        self.assertLess((direct - fft).max_abs(), 1e-12)

    def test_multiply_matches_pointwise_product(self):
        """evaluate(a b) = evaluate(a) evaluate(b) at 100 random points, on both product paths."""
        rng = np.random.default_rng(12)
        a = random_series(2, 5, 12, rng)
        b = random_series(2, 4, 12, rng)
        points = rng.random((100, 2))
        expected = evaluate(a, points) * evaluate(b, points)
        npt.assert_allclose(evaluate(multiply(a, b), points), expected, atol=1e-10)
        apply_settings(overrides={"fourier": {"direct_product_limit": 0}})
        npt.assert_allclose(evaluate(multiply(a, b), points), expected, atol=1e-10)

    def test_multiply_cap_records_truncation_loss(self):
        """cos^2 = 1/2 + cos(4 pi x)/2; capping at radius 1 drops two modes of size 1/4."""
        c = cosine()
        full = c * c
        self.assertAlmostEqual(full.mean().real, 0.5)
        self.assertAlmostEqual(full.coeff((2,)).real, 0.25)
        capped = multiply(c, c, cap=1)
        self.assertEqual(len(capped), 1)
        self.assertAlmostEqual(capped.truncation_loss, np.sqrt(2) * 0.25)

    def test_truncate_accumulates_loss(self):
        """Successive truncations add up their dropped l2 norms."""
        s = FourierSeries.from_dict(1, {(0,): 1.0, (2,): 3.0, (5,): 4.0})
        once = s.truncate(4)
        twice = once.truncate(0)
        self.assertAlmostEqual(once.truncation_loss, 4.0)
        self.assertAlmostEqual(twice.truncation_loss, 7.0)

    def test_decay_diagnostic(self):
        """max ||m||^k |a_m| ignores the mean."""
        s = FourierSeries.from_dict(2, {(0, 0): 100.0, (3, 4): 0.5})
        self.assertAlmostEqual(decay_diagnostic(s, 2), 12.5)
        self.assertEqual(decay_diagnostic(FourierSeries.constant(2, 1.0), 3), 0.0)

    def test_sup_norm_estimate_of_cosine(self):
        """The grid estimate of sup |cos| is 1."""
        self.assertAlmostEqual(sup_norm_estimate(cosine(amplitude=2.0)), 2.0, places=12)

    def test_adding_series_on_different_tori_fails(self):
        """Series on T^1 and T^2 cannot be added."""
        with self.assertRaises(DimensionMismatchError):
            cosine(dims=1) + cosine(dims=2)

    def test_random_series_is_real_band_limited(self):
        """random_series returns hermitian data inside the requested box."""
        rng = np.random.default_rng(3)
        s = random_series(3, 2, 6, rng)
        self.assertTrue(s.real)
        self.assertLessEqual(int(np.abs(s.modes).max()), 2)
        for m, a in s.items():
            self.assertAlmostEqual(s.coeff(tuple(-x for x in m)), np.conj(a))

    def test_json_codec_omits_negligible_coefficients(self):
        """Coefficients below 1e-15 are not written; the real flag survives."""
        s = FourierSeries.from_dict(1, {(1,): 0.5, (-1,): 0.5, (3,): 1e-17, (-3,): 1e-17}, real=True)
        data = series_to_json(s)
        self.assertEqual(data["dims"], 1)
        self.assertTrue(data["real"])
        self.assertEqual(sorted(c["m"][0] for c in data["coeffs"]), [-1, 1])
        back = series_from_json(data)
        self.assertTrue(back.real)
        self.assertEqual(back.coeff((1,)), 0.5)

    def test_save_and_load_series(self):
        """save_series writes the JSON format that load_series reads."""
        path = os.path.join(self.test_dir, "f.json")
        s = FourierSeries.from_dict(2, {(1, -1): 0.25 + 0.5j, (-1, 1): 0.25 - 0.5j}, real=True)
        save_series(path, s)
        loaded = load_series(path)
        self.assertEqual(loaded.to_dict(), s.to_dict())


if __name__ == '__main__':
    unittest.main()
