from pathlib import Path
import tempfile

import numpy as np
from django.test import SimpleTestCase, tag

from solitons.exceptions import DegenerateInputError, NonPhysicalMaximizerError, ValidationFailure
from solitons.grid import Grid, lp_norm
from solitons.maximize import SolverConfig, make_result, solve_adaptive
from solitons.orlicz import OrliczParams, normalize
from solitons.output import write_profile_csv, write_summary_json
from solitons.whitham import SolitaryWave, mass_identity, steady_residual, to_wave, wave_from_files


class ToWaveTest(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(l=5, n=1024)

    # test that only converged maximizers are transformed
    def test_not_converged(self):
        p = OrliczParams(10.0)
        f = normalize(self.grid.sample(lambda x: np.exp(-(x / 4.0) ** 2)), p)
        result = make_result(f, p, residual=0.5, iterations=3, tol=1e-3)
        with self.assertRaises(ValidationFailure):
            to_wave(result, p)

    # test that a profile rising above alpha is refused
    def test_non_physical(self):
        p = OrliczParams(1.0)
        f = normalize(self.grid.sample(lambda x: np.exp(-(8.0 * x) ** 2)), p)
        result = make_result(f, p, residual=0.5, iterations=3, tol=1.0)
        self.assertGreater(result.peak_ratio, 1.0)
        with self.assertRaises(NonPhysicalMaximizerError):
            to_wave(result, p)

    # test the scaling from f to phi and the wave speed
    def test_scaling(self):
        p = OrliczParams(10.0)
        f = normalize(self.grid.sample(lambda x: np.exp(-(x / 4.0) ** 2)), p)
        result = make_result(f, p, residual=0.5, iterations=3, tol=1.0)
        wave = to_wave(result, p)
        denominator = 2.0 - result.l3_cubed / 3.0
        np.testing.assert_allclose(wave.phi.values, f.values * result.J ** 2 / denominator, rtol=1e-14)
        self.assertAlmostEqual(wave.mu, 20.0 * result.J ** 2 / denominator, places=13)
        self.assertIn('extreme_gap', wave.diagnostics)

    # test that a stored converged flag is rechecked against the tolerance
    def test_from_files_loose_profile(self):
        p = OrliczParams(10.0)
        f = normalize(self.grid.sample(lambda x: np.exp(-(x / 4.0) ** 2)), p)
        with tempfile.TemporaryDirectory() as directory:
            stem = Path(directory) / 'solve_alpha_10'
            write_summary_json(stem.with_suffix('.json'), {'alpha': 10.0, 'converged': True, 'iterations': 3})
            write_profile_csv(stem.with_suffix('.csv'), f)
            with self.assertRaises(ValidationFailure):
                wave_from_files(stem.with_suffix('.json'), stem.with_suffix('.csv'))
            result, wave = wave_from_files(stem.with_suffix('.json'), stem.with_suffix('.csv'), tol=1.0)
        self.assertTrue(result.converged)
        self.assertEqual(wave.alpha, 10.0)

    # test that a vanishing profile has no residual
    def test_zero_profile(self):
        wave = SolitaryWave(phi=self.grid.zeros(), mu=1.0, alpha=1.0)
        with self.assertRaises(DegenerateInputError):
            steady_residual(wave)


@tag('slow')
class SolitaryWaveTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.p = OrliczParams(10.0)
        cls.result = solve_adaptive(cls.p, SolverConfig(tol=1e-10))
        cls.wave = to_wave(cls.result, cls.p)

    # test the steady equation and its two identities
    def test_diagnostics(self):
        d = self.wave.diagnostics
        self.assertLess(d['steady_residual'], 1e-8)
        self.assertLess(d['branch_residual'], 1e-7)
        self.assertLess(d['mass_identity_gap'], 1e-6)
        self.assertGreater(self.wave.mu, 1.0)
        self.assertLess(self.wave.mu, 2.0)
        self.assertLessEqual(d['sup_phi'], self.wave.mu / 2.0)
        self.assertTrue(d['bell_shaped'])

    # test that doubling the wave breaks the mass identity
    def test_doubled_wave(self):
        doubled = SolitaryWave(phi=self.wave.phi * 2.0, mu=self.wave.mu, alpha=10.0)
        self.assertAlmostEqual(mass_identity(doubled), 0.5, delta=1e-5)

    # test that a perturbed profile is not a solution
    def test_perturbed_wave(self):
        phi = self.wave.phi
        bump = 1e-2 * lp_norm(phi, np.inf) * np.exp(-np.asarray(phi.grid.nodes) ** 2)
        perturbed = SolitaryWave(phi=phi.with_values(phi.values + bump), mu=self.wave.mu, alpha=10.0)
        self.assertGreater(steady_residual(perturbed), 1e-4)

    # test rebuilding the wave from the files written by a solve
    def test_from_files(self):
        with tempfile.TemporaryDirectory() as directory:
            stem = Path(directory) / 'solve_alpha_10'
            write_summary_json(stem.with_suffix('.json'), {
                'alpha': 10.0, 'converged': True, 'iterations': self.result.iterations,
            })
            write_profile_csv(stem.with_suffix('.csv'), self.result.f)
            result, wave = wave_from_files(stem.with_suffix('.json'), stem.with_suffix('.csv'))
        self.assertTrue(result.converged)
        self.assertEqual(result.J, self.result.J)
        self.assertAlmostEqual(wave.mu, self.wave.mu, places=14)
