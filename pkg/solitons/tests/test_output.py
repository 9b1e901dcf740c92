from pathlib import Path
import json
import tempfile

import numpy as np
from django.test import SimpleTestCase, override_settings

from solitons.exceptions import GridError, ValidationFailure
from solitons.grid import Grid
from solitons.output import (
    BOTH,
    CSV,
    JSON,
    output_stem,
    read_profile,
    read_summary,
    render_json,
    wants,
    write_csv,
    write_outputs,
    write_profile_csv,
    write_summary_json,
)


class OutputTest(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)
        self.grid = Grid(l=3, n=64)
        self.f = self.grid.sample(lambda x: np.exp(-x ** 2) / 3.0)

    def tearDown(self):
        self.directory.cleanup()

    # test the header and that %.17g gives the samples back bit for bit
    def test_profile_csv(self):
        path = write_profile_csv(self.root / 'profile.csv', self.f)
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], 'x,f')
        self.assertEqual(len(lines), self.grid.n + 1)
        back = read_profile(path)
        self.assertEqual(back.grid, self.grid)
        np.testing.assert_array_equal(back.values, self.f.values)

    # test that nodes off the uniform grid are rejected
    def test_bad_nodes(self):
        x = np.asarray(self.grid.nodes)
        shifted = write_csv(self.root / 'shifted.csv', {'x': x + 0.01, 'f': self.f.values})
        with self.assertRaises(GridError):
            read_profile(shifted)
        uneven = x.copy()
        uneven[5] += 1e-3
        with self.assertRaises(GridError):
            read_profile(write_csv(self.root / 'uneven.csv', {'x': uneven, 'f': self.f.values}))

    # test that a file with the wrong columns is rejected
    def test_bad_columns(self):
        path = write_csv(self.root / 'single.csv', {'x': self.grid.nodes})
        with self.assertRaises(ValidationFailure):
            read_profile(path)
        with self.assertRaises(ValidationFailure):
            read_profile(self.root / 'missing.csv')

    # test the JSON layout
    def test_render_json(self):
        rendered = render_json({'alpha': 2.0, 'converged': True})
        self.assertTrue(rendered.endswith(b'}\n'))
        self.assertIn(b'\n  "alpha"', rendered)
        self.assertEqual(json.loads(rendered), {'alpha': 2.0, 'converged': True})

    # test reading a stored summary back
    def test_read_summary(self):
        path = write_summary_json(self.root / 'run.json', {'alpha': 2.0, 'converged': True, 'J': 0.5})
        summary = read_summary(path)
        self.assertEqual(summary['alpha'], 2.0)
        self.assertTrue(summary['converged'])
        self.assertEqual(summary['iterations'], 0)

    # test that invalid summaries are rejected
    def test_invalid_summary(self):
        path = write_summary_json(self.root / 'bad.json', {'alpha': -1.0, 'converged': True})
        with self.assertRaises(ValidationFailure):
            read_summary(path)
        broken = self.root / 'broken.json'
        broken.write_text('{"alpha": ')
        with self.assertRaises(ValidationFailure):
            read_summary(broken)

    # test the stem derived from --out
    def test_output_stem(self):
        self.assertEqual(output_stem(self.root / 'a.json'), self.root / 'a')
        self.assertEqual(output_stem(self.root, 'kernel'), self.root / 'kernel')
        self.assertEqual(output_stem(self.root / 'new' / 'run'), self.root / 'new' / 'run')
        self.assertTrue((self.root / 'new').is_dir())
        with override_settings(SOLITONS={'OUTPUT_DIR': self.root / 'runs'}):
            self.assertEqual(output_stem(None, 'solve'), self.root / 'runs' / 'solve')

    # test that the format selects the files written
    def test_write_outputs(self):
        columns = {'x': self.grid.nodes, 'f': self.f.values}
        stem = self.root / 'out'
        self.assertEqual(write_outputs(stem, JSON, {'a': 1}, columns), [stem.with_suffix('.json')])
        self.assertEqual(write_outputs(stem, CSV, {'a': 1}, columns), [stem.with_suffix('.csv')])
        self.assertEqual(len(write_outputs(stem, BOTH, {'a': 1}, columns)), 2)
        self.assertTrue(wants(BOTH, CSV))
        self.assertFalse(wants(JSON, CSV))
