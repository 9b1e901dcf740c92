from pathlib import Path
import math

import numpy as np
from django.test import SimpleTestCase

from solitons.grid import Grid, grid_for_alpha
from solitons.maximize import make_result
from solitons.orlicz import OrliczParams, normalize
from solitons.output import render_json
from solitons.serializers import (
    MaximizerSummarySerializer,
    SolveSerializer,
    SweepSerializer,
    ThresholdSerializer,
    VerifyReportSerializer,
    VerifySerializer,
    WaveSerializer,
)
from solitons.verify import CheckRow, VerifyReport


class SolveSerializerTest(SimpleTestCase):

    # test the defaults of a minimal solve
    def test_defaults(self):
        serializer = SolveSerializer(data={'alpha': '2.5'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.command, 'solve')
        self.assertEqual(config.fmt, 'both')
        self.assertEqual(config.seed, 0)
        self.assertIsNone(config.l)
        self.assertFalse(config.explicit_grid)
        self.assertEqual(config.grid(2.5), grid_for_alpha(2.5))
        self.assertEqual(config.solver_config().tol, 1e-10)

    # test an explicit grid and solver options
    def test_explicit_options(self):
        serializer = SolveSerializer(data={
            'alpha': '10', 'l': '3', 'n': '256', 'tol': '1e-8', 'damping': '0.01', 'out': 'runs/x.json',
        })
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.grid(10.0), Grid(l=3, n=256))
        self.assertEqual(config.out, Path('runs/x.json'))
        cfg = config.solver_config()
        self.assertEqual(cfg.tol, 1e-8)
        self.assertEqual(cfg.damping_floor, 0.01)

    # test rejected values
    def test_invalid_values(self):
        cases = [
            ({'alpha': '-1'}, 'alpha'),
            ({'alpha': 'nan'}, 'alpha'),
            ({'alpha': '1', 'n': '100'}, 'n'),
            ({'alpha': '1', 'n': '8'}, 'n'),
            ({'alpha': '1', 'l': 'wide'}, 'l'),
            ({'alpha': '1', 'damping': '2'}, 'damping'),
            ({'alpha': '1', 'tol': '0'}, 'tol'),
            ({'alpha': '1', 'format': 'xml'}, 'format'),
            ({'alpha': '1', 'warm_start': '/no/such/file.csv'}, 'warm_start'),
        ]
        for data, field in cases:
            serializer = SolveSerializer(data=data)
            self.assertFalse(serializer.is_valid(), data)
            self.assertIn(field, serializer.errors)


class SweepSerializerTest(SimpleTestCase):

    # test the range checks
    def test_ranges(self):
        self.assertTrue(SweepSerializer(data={'alpha_min': '1', 'alpha_max': '50'}).is_valid())
        for data in (
            {'alpha_min': '5', 'alpha_max': '1'},
            {'alpha_min': '2', 'alpha_max': '2', 'steps': '4'},
            {'alpha_min': '1', 'alpha_max': '2', 'workers': '4'},
        ):
            serializer = SweepSerializer(data=data)
            self.assertFalse(serializer.is_valid(), data)
            self.assertIn('non_field_errors', serializer.errors)
        cold = SweepSerializer(data={'alpha_min': '1', 'alpha_max': '2', 'workers': '4', 'cold': True})
        self.assertTrue(cold.is_valid(), cold.errors)


class ThresholdSerializerTest(SimpleTestCase):

    # test that --tol is the bracket width and --solver-tol the solver tolerance
    def test_tolerances(self):
        serializer = ThresholdSerializer(data={'lo': '0.5', 'hi': '3', 'tol': '0.1', 'solver_tol': '1e-8'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.width, 0.1)
        self.assertEqual(config.tol, 1e-8)
        self.assertEqual(config.delta, 1e-6)

    # test the bracket order and the delta range
    def test_invalid(self):
        self.assertFalse(ThresholdSerializer(data={'lo': '3', 'hi': '0.5'}).is_valid())
        self.assertFalse(ThresholdSerializer(data={'lo': '0.5', 'hi': '3', 'delta': '1'}).is_valid())


class WaveSerializerTest(SimpleTestCase):

    # test that exactly one source is given
    def test_one_source(self):
        self.assertTrue(WaveSerializer(data={'alpha': '3'}).is_valid())
        self.assertFalse(WaveSerializer(data={}).is_valid())
        missing = WaveSerializer(data={'source': '/no/such/solve_alpha_3.json'})
        self.assertFalse(missing.is_valid())
        self.assertIn('source', missing.errors)


class VerifySerializerTest(SimpleTestCase):

    # test the suite names
    def test_suites(self):
        serializer = VerifySerializer(data={})
        self.assertTrue(serializer.is_valid())
        self.assertEqual(serializer.save().suite, 'all')
        self.assertTrue(VerifySerializer(data={'suite': 'orlicz'}).is_valid())
        unknown = VerifySerializer(data={'suite': 'nope'})
        self.assertFalse(unknown.is_valid())
        self.assertIn('suite', unknown.errors)


class ResultSerializerTest(SimpleTestCase):

    # test the maximizer summary without a wave
    def test_maximizer_summary(self):
        grid = Grid(l=5, n=1024)
        p = OrliczParams(3.0)
        f = normalize(grid.sample(lambda x: np.exp(-x ** 2)), p)
        result = make_result(f, p, residual=1e-3, iterations=7, tol=1e-10)
        data = MaximizerSummarySerializer(result, context={'wave': None}).data
        self.assertEqual(data['alpha'], 3.0)
        self.assertEqual(data['alphaJ2'], result.alpha_j2)
        self.assertEqual((data['l'], data['n']), (5, 1024))
        self.assertFalse(data['converged'])
        self.assertIsNone(data['mu'])
        self.assertIsNone(data['sup_phi'])

    # test that infinite check values render as null
    def test_non_finite_check(self):
        report = VerifyReport(suite='whitham', seed=0, checks=(
            CheckRow('whitham', 'wrong_branch', math.inf, 1e-3, True),
        ))
        data = VerifyReportSerializer(report).data
        self.assertIsNone(data['checks'][0]['value'])
        self.assertTrue(data['passed'])
        self.assertIn(b'"value":null', render_json(data).replace(b' ', b''))
