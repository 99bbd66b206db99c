"""
Phase fields and phase files.

Call:
    pytest -v tests/test_phases.py
"""

import math
import unittest
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from silversplit.exceptions import ConfigError
from silversplit.phases import (
    CRITICAL_DEFECT, RandomPhases, TablePhases, ZeroPhases,
    load_phases, primary_defects, primary_index, reduce_angle,
)
from silversplit.resonances import pell_vector
from .conftest import TMP_DIR, write_phases


class AngleTest(unittest.TestCase):

    def test_reduce(self):
        self.assertAlmostEqual(reduce_angle(0.5), 0.5)
        self.assertEqual(reduce_angle(math.pi), math.pi)
        self.assertEqual(reduce_angle(-math.pi), math.pi)
        self.assertAlmostEqual(reduce_angle(2*math.pi + 0.25), 0.25)
        self.assertAlmostEqual(reduce_angle(-2*math.pi - 0.25), -0.25)

    def test_primary_index(self):
        for n in range(15):
            self.assertEqual(primary_index(pell_vector(n)), n)
        self.assertIsNone(primary_index((1, 2)))
        self.assertIsNone(primary_index((-1, 3)))
        self.assertIsNone(primary_index((1, 0)))


class PhaseFieldTest(unittest.TestCase):

    def test_zero(self):
        phases = ZeroPhases()
        self.assertTrue(phases.is_zero())
        self.assertEqual(phases.sigma((3, 4)), 0.0)
        self.assertEqual(list(phases.sigmas([(1, 0), (0, 1)])), [0.0, 0.0])

    def test_table(self):
        phases = TablePhases({(0, 1): 0.5, (-1, 2): -1.0})
        self.assertFalse(phases.is_zero())
        self.assertEqual(phases.sigma((0, 1)), 0.5)
        self.assertEqual(phases.sigma((7, 7)), 0.0)
        np.testing.assert_array_equal(phases.sigmas(np.array([[0, 1], [-1, 2], [1, 0]])), [0.5, -1.0, 0.0])
        self.assertTrue(TablePhases({(0, 1): 0.0}).is_zero())

    def test_random_shared(self):
        phases = RandomPhases(seed=9)
        with ThreadPoolExecutor(max_workers=8) as pool:
            shared = list(pool.map(lambda n: phases.sigma(pell_vector(n)), [25 - (i % 25) for i in range(200)]))
        fresh = RandomPhases(seed=9)
        self.assertEqual(shared, [fresh.sigma(pell_vector(25 - (i % 25))) for i in range(200)])

    def test_random_deterministic(self):
        ks = [(1, 0), (0, 1), (-3, 7), (5, 1), (-12, 29)]
        a, b = RandomPhases(seed=42), RandomPhases(seed=42)
        # query order must not matter
        first = [a.sigma(k) for k in ks]
        second = [b.sigma(k) for k in reversed(ks)][::-1]
        self.assertEqual(first, second)
        self.assertNotEqual(first, [RandomPhases(seed=43).sigma(k) for k in ks])
        self.assertTrue(all(-math.pi <= s <= math.pi for s in first))

    def test_describe(self):
        self.assertEqual(ZeroPhases().describe(), {"mode": "zero"})
        self.assertEqual(
            TablePhases({(0, 1): 0.5, (-1, 2): -1.0}).describe(),
            {"mode": "table", "records": [{"k": [-1, 2], "sigma": -1.0}, {"k": [0, 1], "sigma": 0.5}]},
        )
        self.assertEqual(RandomPhases(seed=4, bounded_primary=False).describe(), {"mode": "random", "seed": 4, "bounded_primary": False})

    def test_random_primary_condition(self):
        for seed in range(5):
            defects = primary_defects(RandomPhases(seed=seed), 30)
            self.assertEqual(sorted(defects), list(range(1, 31)))
            self.assertTrue(all(abs(d) < CRITICAL_DEFECT for d in defects.values()))

    def test_primary_defects_zero(self):
        self.assertTrue(all(d == 0 for d in primary_defects(ZeroPhases(), 10).values()))


class LoadPhasesTest(unittest.TestCase):

    def test_records(self):
        path = write_phases([{"k": [0, 1], "sigma": 0.25}, {"k": [-1, 3], "sigma": -2.0}])
        phases = load_phases(path)
        self.assertIsInstance(phases, TablePhases)
        self.assertEqual(phases.sigma((0, 1)), 0.25)
        self.assertEqual(phases.sigma((-1, 3)), -2.0)
        self.assertEqual(phases.sigma((1, 1)), 0.0)

    def test_random_mode(self):
        phases = load_phases(write_phases({"mode": "random", "seed": 9, "bounded_primary": False}))
        self.assertIsInstance(phases, RandomPhases)
        self.assertEqual(phases.seed, 9)
        self.assertFalse(phases.bounded_primary)

    def test_errors(self):
        bad = [
            {"mode": "other"},
            [{"k": [0, 1]}],
            [{"k": [0, -1], "sigma": 0.0}],
            [{"k": [-2, 0], "sigma": 0.0}],
            "just a string",
        ]
        for data in bad:
            with self.assertRaises(ConfigError):
                load_phases(write_phases(data))

    def test_unreadable(self):
        with self.assertRaises(ConfigError):
            load_phases(TMP_DIR/"does_not_exist.json")
        path = TMP_DIR/"broken.json"
        path.write_text("[{", encoding="utf-8")
        with self.assertRaises(ConfigError):
            load_phases(path)

    def test_random_mode_old_key(self):
        phases = load_phases(write_phases({"mode": "random", "check46": False}))
        self.assertFalse(phases.bounded_primary)
        self.assertEqual(phases.seed, 0)
