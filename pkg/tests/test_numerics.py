# -*- coding: utf-8 -*-

import math
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from pyanthropic import numerics
from pyanthropic.errors import DegenerateEvidenceError, DomainError
from pyanthropic.numerics import Gaussian10, Magnitude, RandomSource

log10s = st.floats(min_value=-1000, max_value=1000, allow_nan=False)


class TestNumerics(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        # to run before all tests
        print("\ntesting pyanthropic.numerics...")

    @classmethod
    def tearDownClass(cls):
        # to run after all tests
        pass

    def setUp(self):
        # to run before each test
        pass

    def tearDown(self):
        # to run after each test
        pass

    def test_magnitude_arithmetic(self):
        a, b = Magnitude.power10(300), Magnitude.power10(-200)
        self.assertEqual((a * b).log10, 100.0)
        self.assertEqual((b / a).log10, -500.0)
        self.assertEqual((a**2).log10, 600.0)
        self.assertTrue((Magnitude.zero() * a).is_zero())
        self.assertEqual(Magnitude.from_value(1000), Magnitude.power10(3))
        self.assertEqual(str(Magnitude.power10(-494)), "10^-494")
        with self.assertRaises(ZeroDivisionError):
            a / Magnitude.zero()
        with self.assertRaises(DomainError):
            Magnitude.from_value(-1)
        with self.assertRaises(TypeError):
            a * 2

    def test_magnitude_add(self):
        # 10^0 + 10^0 = 2
        self.assertAlmostEqual((Magnitude.one() + Magnitude.one()).to_float(), 2.0, places=12)
        # far apart: the smaller term vanishes
        big = Magnitude.power10(500) + Magnitude.power10(10)
        self.assertEqual(big.log10, 500.0)
        self.assertEqual(Magnitude.power10(5) + Magnitude.zero(), Magnitude.power10(5))
        small = numerics.mag_add(Magnitude.power10(-11), Magnitude.power10(-14))
        self.assertAlmostEqual(small.log10, math.log10(1.001e-11), places=12)

    def test_magnitude_sub(self):
        d = numerics.mag_sub(Magnitude.from_value(10), Magnitude.from_value(4))
        self.assertAlmostEqual(d.to_float(), 6.0, places=12)
        self.assertTrue(numerics.mag_sub(Magnitude.one(), Magnitude.one()).is_zero())
        # complement of a tiny fraction
        c = numerics.mag_sub(Magnitude.one(), Magnitude.power10(-490))
        self.assertEqual(c.log10, 0.0)
        with self.assertRaises(DomainError):
            numerics.mag_sub(Magnitude.one(), Magnitude.power10(1))

    def test_to_float_limits(self):
        self.assertEqual(Magnitude.power10(400).to_float(), math.inf)
        self.assertEqual(Magnitude.power10(-400).to_float(), 0.0)

    def test_as_exact(self):
        self.assertEqual(numerics.as_exact(Magnitude.power10(12)), Fraction(10**12))
        self.assertEqual(numerics.as_exact(Magnitude.power10(-3)), Fraction(1, 1000))
        with self.assertRaises(DomainError):
            numerics.as_exact(Magnitude.power10(500))
        with self.assertRaises(DomainError):
            numerics.as_exact(Magnitude(0.5))
        with self.assertRaises(TypeError):
            numerics.as_exact(0.5)

    def test_unify(self):
        self.assertEqual(numerics.unify([1, Fraction(1, 3)]), [Fraction(1), Fraction(1, 3)])
        out = numerics.unify([1, 0.5])
        self.assertTrue(all(isinstance(v, Magnitude) for v in out))
        # beyond 128 bits exact mode is left
        out = numerics.unify([2**130, 1])
        self.assertIsInstance(out[0], Magnitude)

    def test_normalize(self):
        p = numerics.normalize([1, 1, 2])
        self.assertEqual(len(p), 3)
        self.assertAlmostEqual(sum(p), 1.0, places=15)
        self.assertAlmostEqual(p[2], 0.5, places=15)
        self.assertEqual(numerics.normalize_exact([1, 2]), [Fraction(1, 3), Fraction(2, 3)])
        for f in (numerics.normalize, numerics.normalize_log, numerics.normalize_exact):
            with self.assertRaises(DegenerateEvidenceError):
                f([0, 0])

    def test_normalize_log_keeps_tiny_values(self):
        m = numerics.normalize_log([Magnitude.power10(-490), Magnitude.one()])
        self.assertTrue(m[0].isclose(Magnitude.power10(-490)))
        self.assertEqual(numerics.normalize([Magnitude.power10(-490), Magnitude.one()])[0], 0.0)

    def test_compensated_mean(self):
        values = [1e16, 1.0, -1e16, 1.0]
        self.assertEqual(numerics.compensated_mean(values), 0.5)
        with self.assertRaises(DomainError):
            numerics.compensated_mean([])

    def test_exact_products(self):
        rng = np.random.default_rng(2)
        p = rng.integers(-(10**9), 10**9, size=(10**4, 2))
        q = rng.integers(1, 10**9, size=(10**4, 2))
        for (p1, p2), (q1, q2) in zip(p.tolist(), q.tolist()):
            prod = numerics.ExactProb(p1, q1) * numerics.ExactProb(p2, q2)
            self.assertEqual(prod.numerator * q1 * q2, p1 * p2 * prod.denominator)

    def test_lognormal_and_interval(self):
        g = Gaussian10(math.log10(0.1), 0.2)
        self.assertAlmostEqual(numerics.lognormal_mean(g), 0.111, delta=0.0005)
        lo, hi = numerics.central_interval(g)
        self.assertAlmostEqual(lo, 0.041, delta=0.0006)
        self.assertAlmostEqual(hi, 0.247, delta=0.0006)
        lo, hi = numerics.central_interval(Gaussian10(math.log10(0.1), 1.25))
        self.assertAlmostEqual(math.log10(hi / lo), 4.9, delta=0.01)
        with self.assertRaises(DomainError):
            numerics.central_interval(g, coverage=1.0)

    def test_std_normal_quantile(self):
        self.assertAlmostEqual(numerics.std_normal_quantile(0.975), 1.959964, places=6)
        self.assertAlmostEqual(numerics.std_normal_quantile(0.5), 0.0, places=12)
        # far tail stays accurate
        self.assertAlmostEqual(numerics.std_normal_quantile(1e-10), -6.361340902, places=6)
        for q in (0.0, 1.0, -0.1):
            with self.assertRaises(DomainError):
                numerics.std_normal_quantile(q)

    def test_random_source_substreams(self):
        rs = RandomSource(42)
        a = rs.substream(3).standard_normal(10**5)
        # consuming substream 2 first does not change substream 3
        rs.substream(2).standard_normal(1000)
        b = RandomSource(42).substream(3).standard_normal(10**5)
        np.testing.assert_array_equal(a, b)
        self.assertLess(abs(a.mean()), 0.02)
        self.assertAlmostEqual(a.std(), 1.0, delta=0.01)
        self.assertLess(abs(np.corrcoef(a, rs.substream(4).standard_normal(10**5))[0, 1]), 0.02)
        self.assertFalse(np.array_equal(a, rs.substream(4).standard_normal(10**5)))
        c = RandomSource(42, "pcg64").substream(3).standard_normal(10**5)
        self.assertFalse(np.array_equal(a, c))
        with self.assertRaises(DomainError):
            RandomSource(-1)
        with self.assertRaises(DomainError):
            RandomSource(1, "mt19937")


class TestMagnitudeLaws(unittest.TestCase):
    @given(log10s, log10s)
    def test_mul_adds_exponents(self, a, b):
        self.assertAlmostEqual((Magnitude(a) * Magnitude(b)).log10, a + b, delta=1e-9)

    @given(log10s, log10s)
    def test_add_commutes_and_bounds(self, a, b):
        s1, s2 = Magnitude(a) + Magnitude(b), Magnitude(b) + Magnitude(a)
        self.assertTrue(s1.isclose(s2, abs_tol=1e-12))
        self.assertGreaterEqual(s1.log10, max(a, b))
        self.assertLessEqual(s1.log10, max(a, b) + math.log10(2) + 1e-12)

    @given(log10s, log10s, log10s)
    def test_add_associates(self, a, b, c):
        left = numerics.mag_add(numerics.mag_add(Magnitude(a), Magnitude(b)), Magnitude(c))
        right = numerics.mag_add(Magnitude(a), numerics.mag_add(Magnitude(b), Magnitude(c)))
        self.assertTrue(left.isclose(right, abs_tol=1e-9))

    @given(log10s, st.floats(min_value=0.0, max_value=50.0))
    def test_sub_inverts_add(self, a, gap):
        hi, lo = Magnitude(a + gap), Magnitude(a)
        back = numerics.mag_sub(hi + lo, lo)
        self.assertTrue(back.isclose(hi, abs_tol=1e-9))

    @given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=8))
    def test_normalize_exact_sums_to_one(self, weights):
        if sum(weights) == 0:
            return
        self.assertEqual(sum(numerics.normalize_exact(weights)), 1)


class TestNumericsMonteCarlo(unittest.TestCase):
    """Long runs: 1e7 draws per case."""

    def test_lognormal_mean(self):
        chunk, chunks = 10**6, 10
        for sd10 in (0.2, 0.75, 1.25):
            g = Gaussian10(-1.0, sd10)
            rs = RandomSource(31)
            sums, squares = [], []
            for k in range(chunks):
                x = 10.0 ** (g.mean10 + g.sd10 * rs.substream(k).standard_normal(chunk))
                sums.append(float(x.sum()))
                squares.append(float((x * x).sum()))
            n = chunk * chunks
            mean = math.fsum(sums) / n
            se = math.sqrt((math.fsum(squares) / n - mean**2) / n)
            self.assertLess(abs(mean - numerics.lognormal_mean(g)), 4 * se, sd10)


if __name__ == "__main__":
    unittest.main()
