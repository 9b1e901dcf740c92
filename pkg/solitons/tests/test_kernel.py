import math

import numpy as np
from django.test import SimpleTestCase

from solitons.grid import Grid, inner_product
from solitons.kernel import (
    HALF_EXPONENT,
    SERIES_CUTOFF,
    WHITHAM_EXPONENT,
    alpha0_upper_bound,
    convolve,
    homogeneous_coefficient,
    kernel_lp_norm,
    kernel_mass,
    kernel_table,
    quad_form,
    slobodeckij_gap,
    symbol,
    young_bound,
)
from solitons.rearrange import is_bell_shaped


class SymbolTest(SimpleTestCase):

    # test the value at the origin and the small-argument series
    def test_origin(self):
        self.assertEqual(symbol(0.0, WHITHAM_EXPONENT), 1.0)
        below = symbol(SERIES_CUTOFF * (1.0 - 1e-9), WHITHAM_EXPONENT)
        above = symbol(SERIES_CUTOFF * (1.0 + 1e-9), WHITHAM_EXPONENT)
        self.assertAlmostEqual(below, above, places=13)

    # test evenness, the bound by 1 and the homogeneous decay
    def test_shape(self):
        xi = np.linspace(-50.0, 50.0, 1001)
        values = symbol(xi, WHITHAM_EXPONENT)
        np.testing.assert_allclose(values, values[::-1], rtol=1e-14)
        self.assertTrue(np.all(values <= 1.0))
        self.assertAlmostEqual(symbol(40.0, WHITHAM_EXPONENT), 1.0 / math.sqrt(40.0), places=14)

    # test that exponents outside (0, 1] are rejected
    def test_invalid_exponent(self):
        with self.assertRaises(ValueError):
            symbol(1.0, 0.0)
        with self.assertRaises(ValueError):
            symbol(1.0, 1.5)


class ConvolutionTest(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(l=5, n=1024)
        self.rng = np.random.default_rng(0)

    # test that constants are left unchanged (unit mass)
    def test_constant(self):
        ones = self.grid.sample(np.ones_like)
        np.testing.assert_allclose(convolve(ones).values, 1.0, atol=1e-13)

    # test the two expressions of J^2 and the bound by the L^2 norm
    def test_quad_form(self):
        for _ in range(5):
            f = self.grid.sample(lambda x: self.rng.uniform(0.0, 1.0, x.size))
            energy = quad_form(f)
            self.assertAlmostEqual(energy / inner_product(f, convolve(f)), 1.0, places=12)
            quarter = convolve(f, HALF_EXPONENT)
            self.assertAlmostEqual(energy / inner_product(quarter, quarter), 1.0, places=10)
            self.assertLessEqual(energy, inner_product(f, f))

    # test that random bell-shaped profiles stay bell-shaped
    def test_bell_preserved(self):
        for _ in range(50):
            widths = self.rng.uniform(0.3, 3.0, 3)
            heights = self.rng.uniform(0.1, 2.0, 3)
            f = self.grid.sample(lambda x: sum(h * np.exp(-(x / w) ** 2) for h, w in zip(heights, widths)))
            self.assertTrue(is_bell_shaped(f))
            smoothed = convolve(f)
            self.assertTrue(is_bell_shaped(smoothed, atol=1e-12 * smoothed.peak))


class KernelTableTest(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(l=6, n=4096)
        self.table = kernel_table(self.grid, WHITHAM_EXPONENT)

    # test the closed-form coefficient of the homogeneous part
    def test_homogeneous_coefficient(self):
        self.assertAlmostEqual(homogeneous_coefficient(0.5), 1.0 / math.sqrt(2.0 * math.pi), places=15)

    # test unit mass with the singular cell integrated in closed form
    def test_mass(self):
        self.assertAlmostEqual(kernel_mass(self.table), 1.0, delta=1e-6)

    # test that the origin is left out of the table
    def test_origin_excluded(self):
        self.assertEqual(self.table.nodes.size, self.grid.n - 1)
        self.assertNotIn(0.0, self.table.nodes)
        with self.assertRaises(ValueError):
            self.table.at(0.0)

    # test the near-origin bound and the fast decay
    def test_near_origin_and_decay(self):
        for x in (1.0 / 32.0, 0.25, 0.5, 1.0):
            self.assertLess(self.table.at(x), 1.0 / math.sqrt(2.0 * math.pi * x))
        self.assertLess(self.table.at(8.0) / self.table.at(4.0), 1.0 / 256.0)
        self.assertGreater(self.table.at(4.0), 0.0)

    # test the L^{3/2} norm against the analytic cap and the Young bound
    def test_lp_norm_and_young(self):
        k_norm = kernel_lp_norm(self.table, 1.5)
        self.assertLess(k_norm, (2.0 / math.pi + 1.0) ** (2.0 / 3.0))
        self.assertLess(alpha0_upper_bound(k_norm), alpha0_upper_bound())
        f = self.grid.sample(lambda x: np.exp(-x ** 2) + 0.5 * np.exp(-(x - 3.0) ** 2))
        lhs, rhs = young_bound(f, k_norm)
        self.assertLessEqual(lhs, rhs)
        with self.assertRaises(ValueError):
            kernel_lp_norm(self.table, 2.0)

    # test the analytic bound on alpha_0
    def test_alpha0_upper_bound(self):
        self.assertAlmostEqual(alpha0_upper_bound(), 2.385, delta=1e-3)


class SlobodeckijTest(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(l=6, n=4096)

    # test the identity for a Gaussian
    def test_gaussian(self):
        lhs, rhs = slobodeckij_gap(self.grid.sample(lambda x: np.exp(-x ** 2)))
        self.assertLess(abs(lhs - rhs) / rhs, 1e-3)

    # test the zero function and a constant
    def test_trivial_profiles(self):
        self.assertEqual(slobodeckij_gap(self.grid.zeros()), (0.0, 0.0))
        lhs, rhs = slobodeckij_gap(self.grid.sample(np.ones_like))
        self.assertAlmostEqual(lhs, 0.0, delta=1e-9)
        self.assertAlmostEqual(rhs, 0.0, delta=1e-9)
