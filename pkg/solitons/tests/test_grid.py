import math

import numpy as np
from django.test import SimpleTestCase

from solitons.exceptions import GridError, GridMismatchError
from solitons.grid import (
    Grid,
    GridFunction,
    dft,
    grid_for_alpha,
    idft,
    inner_product,
    lp_norm,
    quadrature,
    resample,
    spectral_energy,
)


class GridTest(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(l=5, n=1024)
        self.gaussian = self.grid.sample(lambda x: np.exp(-x ** 2))

    # test the node layout and spacing
    def test_nodes_and_spacing(self):
        grid = Grid(l=3, n=256)
        self.assertEqual(grid.L, 8.0)
        self.assertEqual(grid.dx, 1.0 / 16.0)
        self.assertEqual(grid.nodes[0], -8.0)
        self.assertEqual(grid.nodes[grid.origin], 0.0)
        self.assertAlmostEqual(grid.nodes[-1], 8.0 - 1.0 / 16.0, places=15)

    # test that invalid grid parameters are rejected
    def test_invalid_parameters(self):
        with self.assertRaises(GridError):
            Grid(l=3, n=100)
        with self.assertRaises(GridError):
            Grid(l=3, n=8)
        with self.assertRaises(GridError):
            Grid(l=-1, n=64)

    # test that tables on the grid cannot be modified in place
    def test_nodes_read_only(self):
        with self.assertRaises(ValueError):
            self.grid.nodes[0] = 1.0

    # test that non-finite samples are rejected
    def test_non_finite_samples(self):
        values = np.zeros(self.grid.n)
        values[3] = np.nan
        with self.assertRaises(GridError):
            GridFunction(self.grid, values)

    # test the Fourier transform of a Gaussian against its closed form
    def test_dft_gaussian(self):
        coeffs = dft(self.gaussian)
        exact = math.sqrt(math.pi) * np.exp(-self.grid.freqs ** 2 / 4.0)
        self.assertLess(np.max(np.abs(coeffs - exact)), 1e-12)

    # test that a constant has only the zero mode
    def test_dft_constant(self):
        coeffs = dft(self.grid.sample(np.ones_like))
        zero = self.grid.n // 2
        self.assertAlmostEqual(coeffs[zero].real, 2.0 * self.grid.L, places=12)
        others = np.delete(coeffs, zero)
        self.assertLess(np.max(np.abs(others)), 1e-12)

    # test that a single Fourier mode gives a single pair of coefficients
    def test_dft_single_mode(self):
        k = 3
        xi = math.pi * k / self.grid.L
        coeffs = dft(self.grid.sample(lambda x: np.cos(xi * x)))
        zero = self.grid.n // 2
        for index in (zero - k, zero + k):
            self.assertAlmostEqual(coeffs[index].real, self.grid.L, places=12)
            self.assertEqual(self.grid.freqs[index], math.copysign(xi, index - zero))
        others = np.delete(coeffs, [zero - k, zero + k])
        self.assertLess(np.max(np.abs(others)), 1e-12)

    # test that idft inverts dft
    def test_idft_inverts_dft(self):
        back = idft(dft(self.gaussian), self.grid)
        self.assertLess(np.max(np.abs(back.values - self.gaussian.values)), 1e-14)

    # test Parseval's identity on the grid
    def test_parseval(self):
        energy = spectral_energy(dft(self.gaussian), self.grid)
        self.assertAlmostEqual(energy, inner_product(self.gaussian, self.gaussian), places=13)
        self.assertAlmostEqual(energy, math.sqrt(math.pi / 2.0), places=12)

    # test quadrature and norms of a Gaussian
    def test_quadrature_and_norms(self):
        self.assertAlmostEqual(quadrature(self.gaussian), math.sqrt(math.pi), places=13)
        self.assertEqual(lp_norm(self.gaussian, np.inf), 1.0)
        self.assertAlmostEqual(lp_norm(self.gaussian, 2) ** 2, math.sqrt(math.pi / 2.0), places=13)

    # test that functions on different grids cannot be combined
    def test_grid_mismatch(self):
        other = Grid(l=4, n=1024).zeros()
        with self.assertRaises(GridMismatchError):
            inner_product(self.gaussian, other)

    # test the automatic domain for small, moderate and large alpha
    def test_grid_for_alpha(self):
        self.assertEqual(grid_for_alpha(1.0), Grid(l=6, n=4096))
        self.assertEqual(grid_for_alpha(10.0), Grid(l=9, n=8192))
        self.assertEqual(grid_for_alpha(0.1), Grid(l=12, n=8192))
        self.assertEqual(grid_for_alpha(5.0), Grid(l=8, n=4096))
        self.assertEqual(grid_for_alpha(50.0), Grid(l=11, n=8192))
        self.assertEqual(grid_for_alpha(10.0, max_n=1024).n, 1024)

    # test resampling onto a larger domain
    def test_resample(self):
        self.assertIs(resample(self.gaussian, self.grid), self.gaussian)
        wider = Grid(l=6, n=2048)
        moved = resample(self.gaussian, wider)
        self.assertEqual(moved.peak, 1.0)
        self.assertAlmostEqual(quadrature(moved), math.sqrt(math.pi), places=10)
        # zero outside the source domain
        self.assertEqual(moved.values[0], 0.0)
