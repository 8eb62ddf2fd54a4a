#!/usr/bin/env python3

import os
import tempfile
import time
import unittest
from unittest import mock

from omegaconf import DictConfig, OmegaConf

from krullkit import acceptance, checks, rings, worker
from krullkit.util import reload_config, setting, time_limit

# Small counts: the full-size runs live in acceptance.py.
SMALL_COUNTS = {
    'free_lattice_sizes': 3,
    'conservativity': 10,
    'dimensions': 10,
    'kr_agreement': 30,
    'nullstellensatz': 15,
    'ring_dimension': 6,
    'collapse_round_trip': 10,
    'zariski': 20,
    'groebner': 8,
    'boolean_completion': 5,
}


class CheckResultTest(unittest.TestCase):
    def test_record_and_merge(self):
        a = checks.CheckResult('x')
        a.record(True)
        a.record(False, 'first')
        b = checks.CheckResult('x')
        b.record(True)
        merged = a.merge(b)
        self.assertEqual((merged.passed, merged.total), (2, 3))
        self.assertFalse(merged.ok)
        self.assertEqual(merged.to_json()['failures'], ['first'])

    def test_failures_are_capped(self):
        r = checks.CheckResult('x')
        for i in range(checks.MAX_FAILURES + 5):
            r.record(False, str(i))
        self.assertEqual(len(r.failures), checks.MAX_FAILURES)
        self.assertEqual(r.total, checks.MAX_FAILURES + 5)

    def test_unknown_check(self):
        with self.assertRaises(KeyError):
            checks.run_check('nope')


class ChecksTest(unittest.TestCase):
    def test_every_check_passes_at_small_size(self):
        self.assertEqual(set(SMALL_COUNTS), set(checks.CHECKS))
        for name, count in SMALL_COUNTS.items():
            with self.subTest(check=name):
                result = checks.run_check(name, seed=1, count=count)
                self.assertTrue(result.ok, result.failures)
                self.assertGreater(result.total, 0)

    def test_saturation_must_be_complete(self):
        # J itself contains J but misses h in <f^e h> : f^oo.
        with mock.patch.object(rings.PolynomialRing, 'ideal_saturation', lambda self, J, f: list(J)):
            result = checks.run_check('groebner', seed=1, count=8)
        self.assertFalse(result.ok)
        self.assertTrue(any('misses an element' in f for f in result.failures))

    def test_antichain_counts(self):
        self.assertEqual([checks._count_antichains(n) for n in range(4)], [2, 3, 6, 20])


class TaskTest(unittest.TestCase):
    def test_worker_task_runs_locally(self):
        task_result = worker.run_check.run('free_lattice_sizes', 0, 2)
        self.assertIsNone(task_result.error)
        self.assertTrue(task_result.result.ok)

    def test_worker_task_reports_errors(self):
        task_result = worker.run_check.run('nope', 3, 1)
        self.assertIn('KeyError', task_result.error)
        self.assertEqual(task_result.seed, 3)
        self.assertIsNone(task_result.result)

    def test_chunks(self):
        self.assertEqual(acceptance.chunks(50, 100), [50])
        self.assertEqual(acceptance.chunks(250, 100), [100, 100, 50])
        self.assertEqual(acceptance.chunks(200, 100), [100, 100])

    def test_local_submission(self):
        task = acceptance.submit_task('free_lattice_sizes', 0, 2, timeout=60)
        self.assertTrue(acceptance.get_task_result(task).result.ok)


def failing_check(seed: int = 0, count: int = 1) -> checks.CheckResult:
    result = checks.CheckResult('broken')
    result.record(False, 'always fails')
    return result


def acceptance_config(*names) -> DictConfig:
    return OmegaConf.create({'seed': 0, 'counts': {}, 'chunk_size': 100, 'timeout': 0,
                             'checks': list(names), 'fail_fast': False})


class AcceptanceTest(unittest.TestCase):
    def setUp(self):
        self.cwd = os.getcwd()
        self.tmp = tempfile.TemporaryDirectory()
        os.chdir(self.tmp.name)

    def tearDown(self):
        os.chdir(self.cwd)
        self.tmp.cleanup()

    def test_failed_check_exits_non_zero(self):
        with mock.patch.dict(checks.CHECKS, {'broken': (failing_check, 1)}):
            summary = acceptance.run_acceptance(acceptance_config('broken', 'free_lattice_sizes'))
            self.assertEqual(acceptance.failed_checks(summary), ['broken'])
            self.assertTrue(os.path.exists('log.jsonl'))
            with self.assertRaises(SystemExit) as ctx:
                acceptance.main(acceptance_config('broken'))
        self.assertEqual(ctx.exception.code, 1)

    def test_passing_run_returns_normally(self):
        acceptance.main(acceptance_config('free_lattice_sizes'))
        self.assertTrue(os.path.exists('summary.json'))


class ConfigTest(unittest.TestCase):
    def tearDown(self):
        reload_config()

    def test_override_wins(self):
        self.assertEqual(setting('krull.max_search', 7), 7)
        self.assertEqual(setting('entailment.max_enumerate_generators'), 4)

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {'KRULLKIT_MAX_SEARCH': '123'}):
            reload_config()
            self.assertEqual(setting('krull.max_search'), 123)

    def test_time_limit(self):
        with self.assertRaises(TimeoutError):
            with time_limit(1):
                time.sleep(3)


if __name__ == '__main__':
    unittest.main()
