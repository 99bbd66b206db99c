"""
Resonant sequences s(j, n), Pell vectors and their asymptotic constants.

Call:
    pytest -v tests/test_resonances.py
"""

import unittest
from concurrent.futures import ThreadPoolExecutor

from silversplit.exceptions import DomainError
from silversplit.quadratic_field import SILVER, RingElement, bracket, det2, l1_norm
from silversplit.resonances import (
    ResonantSequence, gamma_star, generator, is_primitive, main_secondary_vector,
    numerator, pell_number, pell_vector, primitive_indices, resonance_table,
    resonant_vector, sequence_asymptotics,
)
from . import expects


class PellTest(unittest.TestCase):

    def test_numbers(self):
        self.assertEqual([pell_number(n) for n in range(len(expects.PELL_NUMBERS))], expects.PELL_NUMBERS)

    def test_vectors(self):
        self.assertEqual(pell_vector(0), (0, 1))
        self.assertEqual(pell_vector(1), (-1, 2))
        self.assertEqual(pell_vector(3), (-5, 12))
        with self.assertRaises(DomainError):
            pell_vector(-1)

    def test_primary_sequence(self):
        for n in range(25):
            self.assertEqual(resonant_vector(1, n), pell_vector(n))

    def test_divisor_and_norm(self):
        """|<s0(n), omega>| = Omega^(n+1), 2 |s0(n)|_1 = lambda^(n+1) + (-Omega)^(n+1)."""
        lam, Omega = SILVER.lam, SILVER.Omega
        for n in range(20):
            s0 = pell_vector(n)
            self.assertEqual(abs(bracket(s0)), Omega**(n+1))
            self.assertEqual(lam**(n+1) + (-Omega)**(n+1), RingElement(2*l1_norm(s0)))

    def test_consecutive_basis(self):
        for n in range(1, 20):
            A = (pell_vector(n-1), pell_vector(n))
            self.assertEqual(det2(A), (-1)**(n-1))

    def test_main_secondary(self):
        self.assertEqual(main_secondary_vector(0), (-1, 3))
        for n in range(15):
            a, b = pell_vector(n), pell_vector(n+1)
            self.assertEqual(main_secondary_vector(n), (a[0] + b[0], a[1] + b[1]))
        with self.assertRaises(DomainError):
            main_secondary_vector(-1)


class GeneratorTest(unittest.TestCase):

    def test_generators(self):
        self.assertEqual(generator(1), (0, 1))
        self.assertEqual(generator(3), (-1, 3))
        with self.assertRaises(DomainError):
            generator(0)

    def test_primitive(self):
        self.assertEqual(primitive_indices(10), expects.PRIMITIVE_J10)
        self.assertFalse(is_primitive(2))
        self.assertFalse(is_primitive(5))

    def test_non_primitive_sequence(self):
        with self.assertRaises(DomainError):
            ResonantSequence(2)

    def test_sequence_cache(self):
        seq = ResonantSequence(3)
        self.assertEqual(seq[4], resonant_vector(3, 4))
        self.assertEqual(len(seq.vectors), 5)
        # s(j, m) = (-p(j, m), p(j, m+1))
        p = seq.pell_coefficients(6)
        for m in range(6):
            self.assertEqual(seq[m], (-p[m], p[m+1]))

    def test_sequence_cache_shared(self):
        seq = ResonantSequence(4)
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(lambda n: seq[n], [30 - (i % 30) for i in range(240)]))
        self.assertEqual(len(seq.vectors), 31)
        self.assertEqual(seq.vectors, [resonant_vector(4, n) for n in range(31)])

    def test_pell_coefficients(self):
        self.assertEqual(ResonantSequence(1).pell_coefficients(3), [0, 1, 2, 5, 12])


class NumeratorTest(unittest.TestCase):

    def test_gamma_star(self):
        self.assertEqual(gamma_star(), 0.5)

    def test_first_numerator(self):
        data = numerator((0, 1))
        self.assertAlmostEqual(data.gamma, expects.OMEGA, places=15)
        self.assertAlmostEqual(data.gamma_tilde, 2*expects.OMEGA, places=15)

    def test_pell_numerators(self):
        """gamma_{s0(n)} = (1 + (-1)^(n+1) Omega^(2n+2)) / 2."""
        for n in range(12):
            expected = (1 + (-1)**(n+1) * expects.OMEGA**(2*n+2)) / 2
            self.assertAlmostEqual(numerator(pell_vector(n)).gamma, expected, places=14)

    def test_asymptotics(self):
        for j, (K, gt) in expects.SEQUENCE_LIMITS.items():
            asym = sequence_asymptotics(j)
            self.assertAlmostEqual(asym.K, K, delta=expects.K_TOL)
            self.assertAlmostEqual(asym.gamma_tilde_star, gt, delta=expects.GAMMA_TILDE_TOL)
        self.assertTrue(sequence_asymptotics(1).rate_ok)

    def test_gamma_tilde_bounds(self):
        for j in primitive_indices(50)[1:]:
            gt = sequence_asymptotics(j).gamma_tilde_star
            self.assertGreater(gt, 1, msg=f"j={j}")
            if j >= 6:
                self.assertGreater(gt, expects.GAMMA_TILDE_TAIL, msg=f"j={j}")

    def test_asymptotics_needs_terms(self):
        with self.assertRaises(DomainError):
            sequence_asymptotics(1, N=5)
        with self.assertRaises(DomainError):
            sequence_asymptotics(2)


class ResonanceTableTest(unittest.TestCase):

    def test_layout(self):
        rows = resonance_table(3, 2)
        self.assertEqual(len(rows), 9)
        first = rows[0]
        self.assertEqual((first["j"], first["n"], first["k1"], first["k2"]), (1, 0, 0, 1))
        self.assertEqual([r["primitive"] for r in rows[3:6]], [False]*3)
        self.assertEqual([(r["k1"], r["k2"]) for r in rows[6:]], [resonant_vector(3, n) for n in range(3)])
