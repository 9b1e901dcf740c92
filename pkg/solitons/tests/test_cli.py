from io import StringIO
from pathlib import Path
import json
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from solitons.cli import run
from solitons.verify import verify


class CliTest(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def run_in_tmp(self, argv):
        with self.settings(SOLITONS={'OUTPUT_DIR': self.root}):
            return run(argv)

    # test that unknown or missing subcommands are refused
    def test_unknown_command(self):
        self.assertEqual(run(['bogus']), 2)
        self.assertEqual(run([]), 2)

    # test that invalid values and unknown flags exit with code 2
    def test_invalid_input(self):
        self.assertEqual(self.run_in_tmp(['solve', '--alpha', '-1']), 2)
        self.assertEqual(self.run_in_tmp(['solve', '--alpha', '1', '--n', '100']), 2)
        self.assertEqual(self.run_in_tmp(['kernel', '--bogus']), 2)

    # test the exit code of an unknown suite through call_command
    def test_unknown_suite(self):
        with self.assertRaises(CommandError) as caught:
            call_command('verify', suite='nope', stdout=StringIO())
        self.assertEqual(caught.exception.returncode, 2)

    # test the kernel table on a small grid
    def test_kernel_command(self):
        out = StringIO()
        call_command('kernel', l='3', n='256', out=str(self.root), stdout=out)
        table = self.root / 'kernel_l3_n256.csv'
        lines = table.read_text().splitlines()
        self.assertEqual(lines[0], 'x,K_half,K_quarter')
        self.assertEqual(len(lines), 256)
        summary = json.loads((self.root / 'kernel_l3_n256.json').read_text())
        self.assertEqual((summary['l'], summary['n']), (3, 256))
        self.assertIn('Wrote', out.getvalue())

    # test that a solve cut short exits with code 3 and still writes its summary
    def test_solve_not_converged(self):
        code = self.run_in_tmp([
            'solve', '--alpha', '10', '--l', '5', '--n', '1024', '--max-iter', '3',
            '--format', 'json', '--out', str(self.root / 'short'),
        ])
        self.assertEqual(code, 3)
        summary = json.loads((self.root / 'short.json').read_text())
        self.assertFalse(summary['converged'])
        self.assertEqual(summary['iterations'], 3)
        self.assertIsNone(summary['mu'])
        self.assertFalse((self.root / 'short.csv').exists())

    # test that the orlicz suite passes from the command line
    def test_verify_orlicz(self):
        out = StringIO()
        call_command('verify', suite='orlicz', out=str(self.root), stdout=out)
        report = json.loads((self.root / 'verify_orlicz.json').read_text())
        self.assertTrue(report['passed'])
        self.assertNotIn('FAIL', out.getvalue())

    # test that rerunning the same solve writes the same bytes
    def test_rerun_identical(self):
        for name in ('first', 'second'):
            code = self.run_in_tmp([
                'solve', '--alpha', '10', '--l', '5', '--n', '1024', '--max-iter', '20',
                '--format', 'json', '--out', str(self.root / name),
            ])
            self.assertEqual(code, 3)
        self.assertEqual((self.root / 'first.json').read_bytes(), (self.root / 'second.json').read_bytes())

    # test that a converged solve is reproduced byte for byte
    @tag('slow')
    def test_rerun_converged_identical(self):
        for name in ('first', 'second'):
            self.assertEqual(self.run_in_tmp(['solve', '--alpha', '5', '--out', str(self.root / name)]), 0)
        for suffix in ('.json', '.csv'):
            first = (self.root / 'first').with_suffix(suffix).read_bytes()
            second = (self.root / 'second').with_suffix(suffix).read_bytes()
            self.assertEqual(first, second)
        self.assertTrue(json.loads((self.root / 'first.json').read_text())['converged'])

    # test the rearrangement suite with its Riesz and support checks
    def test_verify_rearrange(self):
        report = verify('rearrange', seed=0)
        names = {row.name for row in report.checks}
        self.assertTrue({'riesz', 'support_preserved', 'five_point_example'} <= names)
        self.assertTrue(report.passed, report.failures)
