import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.core.management import CommandError, call_command
from django.test import TestCase, override_settings

from core import checks
from core.models import VerificationRun
from core.params import VerifyReport


def run(*args):
    out = StringIO()
    call_command('pme', *args, stdout=out)
    return out.getvalue()


class ConstantsCommandTests(TestCase):
    def test_json(self):
        record = json.loads(run('constants', '--m', '2'))
        self.assertAlmostEqual(record['alpha'], 1 / 3)
        self.assertAlmostEqual(record['B'], 1 / 12)
        self.assertAlmostEqual(record['delta'], -1 / 3)
        self.assertEqual(record['d'], 1)

    def test_invalid_exponent(self):
        with self.assertRaises(CommandError) as ctx:
            run('constants', '--m', '0.5')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'pme.env'
            path.write_text('m=3\nd=2\n')
            record = json.loads(run('constants', '--config', str(path), '--m', '2'))
        self.assertEqual(record['m'], 2.0)
        self.assertEqual(record['d'], 2)


class TableCommandTests(TestCase):
    def test_density_csv(self):
        output = run('density', '--m', '2', '--nx', '400')
        lines = output.split('\n')
        self.assertEqual(lines[0], 'x,density')
        self.assertEqual(len(lines), 402)
        self.assertEqual(lines[-1], '')
        self.assertNotIn('\r', output)

    def test_density_json(self):
        rows = json.loads(run('density', '--kind', 'rods', '--t', '0.5', '--xmin', '0', '--xmax', '1', '--nx', '3',
                              '--format', 'json'))
        self.assertEqual(len(rows), 3)
        self.assertAlmostEqual(rows[0]['density'], 0.2820948, places=7)

    def test_domain_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('density', '--kind', 'rods', '--t', '-1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_file_output(self):
        with tempfile.TemporaryDirectory() as tmp, \
                override_settings(PME_LAB={**settings.PME_LAB, 'OUTPUT_DIR': tmp}):
            self.assertEqual(run('cf', '--m', '2', '--nxi', '5', '--out', 'cf.csv'), '')
            self.assertTrue((Path(tmp) / 'cf.csv').read_text().startswith('xi,cf\n'))

    def test_flight_samples_independent_of_threads(self):
        with override_settings(PME_LAB={**settings.PME_LAB, 'CHUNK_SIZE': 100}):
            single = run('simulate-flight', '--n', '3', '--N', '1000', '--seed', '7', '--threads', '1')
            pooled = run('simulate-flight', '--n', '3', '--N', '1000', '--seed', '7', '--threads', '4')
        self.assertEqual(single, pooled)
        lines = single.split('\n')
        self.assertEqual(lines[0], 'x1,seed')
        self.assertTrue(lines[1].endswith(',7'))

    def test_sample_count(self):
        with self.assertRaises(CommandError) as ctx:
            run('simulate-flight', '--n', '3', '--N', '0')
        self.assertEqual(ctx.exception.returncode, 2)


class VerifyCommandTests(TestCase):
    def test_records_reports(self):
        reports = json.loads(run('verify', 'constants'))
        self.assertEqual(list(reports[0]), ['check', 'params', 'value', 'tolerance', 'pass', 'seed', 'n_samples'])
        self.assertTrue(all(report['pass'] for report in reports))
        self.assertEqual(VerificationRun.objects.count(), len(reports))

    def test_no_record(self):
        run('verify', 'constants', '--no-record')
        self.assertFalse(VerificationRun.objects.exists())

    def test_history(self):
        run('verify', 'constants')
        history = json.loads(run('history', '--check', 'self-similarity'))
        self.assertEqual(len(history), 3)
        self.assertEqual({report['check'] for report in history}, {'self-similarity'})

    def test_failing_check(self):
        failing = {'always-fail': lambda options: [VerifyReport.at_most('always-fail', 1.0, 0.0)]}
        with mock.patch.dict(checks.CHECKS, failing):
            with self.assertRaises(CommandError) as ctx:
                run('verify', 'always-fail', '--format', 'csv')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(VerificationRun.objects.get().passed)
