"""
Melnikov harmonics, normalized exponents and dominance.

Call:
    pytest -v tests/test_melnikov.py

The residue/quadrature comparison is the slowest case here; set SILVERSPLIT_SLOW=1
to run it over more angles.
"""

import math
import unittest

import numpy as np

from silversplit.exceptions import ConvergenceError, DomainError
from silversplit.melnikov import (
    C0, D0, G_function, eps_k, g_k, g_star, star_profile,
    transition_ladder, interval_index, harmonic, log_harmonics, candidate_harmonics,
    dominance_profile, h_extrema, half_lattice, ln_tail_bound,
    melnikov_series, separatrix_transform, melnikov_quadrature,
)
from silversplit.phases import RandomPhases
from silversplit.resonances import DEFAULT_PRECISION, pell_vector, main_secondary_vector
from .conftest import SLOW
from . import expects


class ConstantsTest(unittest.TestCase):

    def test_constants(self):
        self.assertAlmostEqual(C0(), math.sqrt(math.pi), places=15)
        self.assertAlmostEqual(D0(), (math.pi/4)**2, places=15)
        self.assertAlmostEqual(D0(2.0), (math.pi/8)**2, places=15)
        with self.assertRaises(DomainError):
            C0(0)
        with self.assertRaises(DomainError):
            D0(-1)

    def test_G_function(self):
        self.assertAlmostEqual(G_function(0.3, 0.3, 4.0), 2.0, places=15)
        # symmetric in ln eps around X
        self.assertAlmostEqual(G_function(0.3*7, 0.3, 1.0), G_function(0.3/7, 0.3, 1.0), places=14)
        X = 1e-3
        self.assertAlmostEqual(G_function(X*expects.LAMBDA**4, X, 1.0), expects.SQRT2, places=14)


class ExponentTest(unittest.TestCase):

    def test_first_harmonic(self):
        k = (0, 1)
        self.assertAlmostEqual(eps_k(k), D0()*(2*expects.OMEGA)**2, places=14)
        self.assertAlmostEqual(g_k(eps_k(k), k), math.sqrt(2*expects.OMEGA), places=14)

    def test_exponent_matches_harmonic(self):
        """beta_k eps^(1/4) / C0 is g_k."""
        eps = 1e-3
        for k in [pell_vector(3), pell_vector(4), main_secondary_vector(3), (2, 1)]:
            term = harmonic(eps, 1.0, k)
            self.assertAlmostEqual(term.beta * eps**0.25 / C0(), g_k(eps, k), places=10)

    def test_log_harmonics(self):
        eps = 1e-3
        ks = [pell_vector(n) for n in range(2, 7)] + [(1, 0), (3, 2)]
        fast = log_harmonics(eps, ks)
        for k, value in zip(ks, fast):
            exact = harmonic(eps, 1.0, k).ln_L_exact
            self.assertLess(abs(value - exact), 1e-9*max(1.0, abs(exact)))

    def test_precision_escalation(self):
        eps = 1e-12
        term = harmonic(eps, eps**3.5, pell_vector(10))
        self.assertEqual(term.precision_bits, DEFAULT_PRECISION + 64)
        self.assertTrue(math.isfinite(term.ln_calL))
        self.assertLess(term.ln_calL, -600)

    def test_neglected_bound(self):
        """alpha exp(-beta) approximates L_k within the neglected-term bound."""
        for eps, k in [(0.5, (0, 1)), (0.1, (1, 0)), (1e-3, pell_vector(3)), (1e-6, main_secondary_vector(5))]:
            term = harmonic(eps, 1.0, k)
            gap = abs(math.expm1(term.ln_L_exact - (term.ln_alpha - term.beta)))
            self.assertLessEqual(gap, term.neglected_bound, msg=str(k))
        self.assertLess(harmonic(1e-6, 1.0, pell_vector(6)).neglected_bound, 1e-12)

    def test_harmonic_domain(self):
        with self.assertRaises(DomainError):
            harmonic(0.0, 1.0, (0, 1))
        with self.assertRaises(DomainError):
            harmonic(1e-3, 1.0, (0, 0))

    def test_candidates_exhaustive(self):
        """Enumeration against brute force over a large half lattice."""
        eps, threshold = 2e-3, 1.6
        ks, g = candidate_harmonics(eps, threshold)
        found = {tuple(k) for k in ks.tolist()}
        brute = {tuple(k) for k in half_lattice(60).tolist() if g_k(eps, tuple(k)) <= threshold}
        self.assertEqual(found, brute)
        self.assertTrue(np.all(g <= threshold))


class LadderTest(unittest.TestCase):

    def test_ladder(self):
        for n in range(1, 8):
            ladder = transition_ladder(n)
            self.assertAlmostEqual(ladder.eps_hat_n, 16*D0() / expects.LAMBDA**(4*n+4), delta=1e-12*ladder.eps_hat_n)
            previous = transition_ladder(n-1).eps_hat_n
            self.assertAlmostEqual(ladder.eps_prime_n, math.sqrt(ladder.eps_hat_n*previous), delta=1e-12*ladder.eps_prime_n)
            self.assertAlmostEqual(ladder.eps_prime_n, ladder.eps_hat_n*expects.LAMBDA**2, delta=1e-12*ladder.eps_prime_n)

    def test_interval_index(self):
        for n in range(2, 9):
            ladder = transition_ladder(n)
            self.assertEqual(interval_index(ladder.eps_hat_n), n)
            self.assertEqual(interval_index(ladder.eps_prime_n*(1 - 1e-9)), n)
            self.assertEqual(interval_index(ladder.eps_prime_n*(1 + 1e-9)), n-1)
        self.assertEqual(interval_index(1.0), 0)
        with self.assertRaises(DomainError):
            interval_index(2.0)

    def test_negative_index(self):
        with self.assertRaises(DomainError):
            transition_ladder(-1)


class DominanceTest(unittest.TestCase):

    def test_star_exponents(self):
        for n in range(2, 9):
            eps = transition_ladder(n).eps_hat_n
            self.assertAlmostEqual(g_star(eps, 1, n), 1.0, places=12)
            self.assertAlmostEqual(g_star(eps, 1, n-1), expects.SQRT2, places=12)
            self.assertAlmostEqual(g_star(eps, 1, n+1), expects.SQRT2, places=12)
            self.assertAlmostEqual(g_star(eps, 3, n-1), expects.SQRT2, places=10)

    def test_star_scaling(self):
        """Advancing the sequence index is a shift of ln eps by 4 ln lambda."""
        eps = 2e-4
        for j in (1, 3):
            for n in range(13):
                self.assertAlmostEqual(g_star(eps, j, n+1), g_star(eps*expects.LAMBDA**4, j, n), delta=1e-12)

    def test_star_profile(self):
        eps = transition_ladder(5).eps_hat_n
        g, j, n, k = star_profile(eps, depth=1)[0]
        self.assertAlmostEqual(g, 1.0, places=12)
        self.assertEqual((j, n, k), (1, 5, pell_vector(5)))

    def test_profile_below_transition(self):
        for n in (4, 6):
            eps = transition_ladder(n).eps_hat_n*0.99
            profile = dominance_profile(eps, depth=4)
            S = profile.S
            self.assertTrue(profile.primary_consistent)
            self.assertEqual(S[0], pell_vector(n))
            self.assertEqual(S[1], pell_vector(n+1))
            self.assertEqual(set(S[2:]), {pell_vector(n-1), main_secondary_vector(n-1)})

    def test_profile_above_transition(self):
        n = 5
        profile = dominance_profile(transition_ladder(n).eps_hat_n*1.01, depth=4)
        self.assertEqual(profile.S[0], pell_vector(n))
        self.assertEqual(profile.S[1], pell_vector(n-1))
        self.assertEqual(set(profile.S[2:]), {pell_vector(n+1), main_secondary_vector(n-1)})

    def test_triple_tie(self):
        profile = dominance_profile(transition_ladder(5).eps_hat_n, depth=4)
        h = profile.h
        self.assertLess(abs(h[0] - 1), 1e-3)
        self.assertLess(max(h[1:]) - min(h[1:]), 1e-3)

    def test_profile_row(self):
        row = dominance_profile(transition_ladder(4).eps_hat_n*0.99, depth=2).as_row()
        self.assertEqual(list(row), ["eps", "n", "h1", "h2", "S1", "S2", "ln_L_S1", "ln_L_S2"])
        self.assertEqual(row["S1"], "-12,29")

    def test_depth(self):
        with self.assertRaises(DomainError):
            dominance_profile(1e-3, depth=0)

    def test_extrema(self):
        h1_min, h1_max = h_extrema(4, points=401, index=1)
        h2_min, h2_max = h_extrema(4, points=401, index=2)
        self.assertAlmostEqual(h1_min, expects.H1_MIN, delta=1e-6)
        self.assertAlmostEqual(h1_max, expects.H1_MAX, delta=1e-4)
        self.assertAlmostEqual(h2_min, expects.H2_MIN, delta=1e-4)
        self.assertAlmostEqual(h2_max, expects.H2_MAX, delta=1e-4)


class SeriesTest(unittest.TestCase):

    def test_half_lattice(self):
        self.assertEqual({tuple(k) for k in half_lattice(1).tolist()}, {(1, 0), (0, 1)})
        self.assertEqual(len(half_lattice(2)), 6)
        self.assertEqual(len(half_lattice(10)), 10*11)

    def test_tail_bound_decreasing(self):
        bounds = [ln_tail_bound(r) for r in (10, 20, 40, 80)]
        self.assertEqual(bounds, sorted(bounds, reverse=True))

    def test_separatrix_transform(self):
        self.assertAlmostEqual(separatrix_transform(0.0), 4.0, places=8)
        a = 1.3
        self.assertAlmostEqual(separatrix_transform(a), 2*math.pi*a / math.sinh(math.pi*a/2), places=8)

    def test_radius_too_small(self):
        with self.assertRaises(ConvergenceError):
            melnikov_series((0.3, 0.4), 0.1, 1.0, radius=10)

    def test_gradient(self):
        eps, h = 0.1, 1e-6
        phases = RandomPhases(seed=3)
        theta = np.array([0.7, 2.1])
        series = melnikov_series(theta, eps, 1.0, phases=phases)
        for i in range(2):
            step = np.zeros(2)
            step[i] = h
            upper = melnikov_series(theta + step, eps, 1.0, phases=phases).value
            lower = melnikov_series(theta - step, eps, 1.0, phases=phases).value
            self.assertAlmostEqual((upper - lower) / (2*h), series.gradient[i], delta=1e-6*np.abs(series.gradient).max())

    def test_parity(self):
        """Without phases L is even and its gradient odd."""
        eps = 0.1
        rng = np.random.default_rng(5)
        for theta in rng.uniform(0, 2*math.pi, size=(5, 2)):
            plus = melnikov_series(theta, eps, 1.0)
            minus = melnikov_series(-theta, eps, 1.0)
            scale = math.exp(plus.ln_scale)
            self.assertAlmostEqual(plus.value, minus.value, delta=1e-12*scale)
            np.testing.assert_allclose(plus.gradient, -minus.gradient, rtol=0, atol=1e-10*scale)

    def test_hessian(self):
        eps, h = 0.1, 1e-5
        phases = RandomPhases(seed=3)
        theta = np.array([0.7, 2.1])
        series = melnikov_series(theta, eps, 1.0, phases=phases)
        np.testing.assert_allclose(series.hessian, series.hessian.T)
        scale = np.abs(series.hessian).max()
        for i in range(2):
            step = np.zeros(2)
            step[i] = h
            upper = melnikov_series(theta + step, eps, 1.0, phases=phases).gradient
            lower = melnikov_series(theta - step, eps, 1.0, phases=phases).gradient
            np.testing.assert_allclose((upper - lower) / (2*h), series.hessian[:, i], atol=1e-6*scale)

    def test_residues_against_quadrature(self):
        eps = 0.2
        rng = np.random.default_rng(11)
        samples = 6 if SLOW else 1
        for theta in rng.uniform(0, 2*math.pi, size=(samples, 2)):
            series = melnikov_series(theta, eps, 1.0)
            quad = melnikov_quadrature(theta, eps, radius=series.radius)
            scale = float(np.exp(log_harmonics(eps, half_lattice(series.radius))).sum())
            self.assertLess(abs(quad - series.value) / scale, 1e-6)
