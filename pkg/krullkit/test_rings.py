#!/usr/bin/env python3

import itertools
import unittest

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from krullkit.errors import CertificateError, InvalidInputError
from krullkit.rings import (ModularRing, PolynomialRing, UnivariatePolynomialRing, integers, modular,
                            power_search, prime_field, rationals, ring_from_flag, univariate_poly,
                            verify_cofactors)


class FlagTest(unittest.TestCase):
    def test_names(self):
        self.assertEqual(ring_from_flag('zz').name, 'zz')
        self.assertEqual(ring_from_flag('q').name, 'q')
        self.assertEqual(ring_from_flag('zmod:12').name, 'zmod:12')
        self.assertEqual(ring_from_flag('ZP:7').name, 'zmod:7')
        self.assertIsInstance(ring_from_flag('poly:q:1'), UnivariatePolynomialRing)
        R = ring_from_flag('poly:zp:5:2')
        self.assertIsInstance(R, PolynomialRing)
        self.assertEqual(R.name, 'poly:zp:5:2')
        self.assertEqual(R.nvars, 2)

    def test_bad_flags(self):
        for flag in ('foo', 'zmod:1', 'zmod:x', 'zp:4', 'poly:q', 'poly:r:2'):
            with self.assertRaises(InvalidInputError, msg=flag):
                ring_from_flag(flag)


class ArithmeticTest(unittest.TestCase):
    def test_modular(self):
        R = modular(12)
        self.assertEqual(R.add(7, 8), 3)
        self.assertEqual(R.neg(5), 7)
        self.assertEqual(R.mul(5, 5), 1)
        self.assertEqual(R.power(2, 5), 8)
        self.assertTrue(R.is_zero(R.mul(4, 3)))
        self.assertEqual(R.inverse(5), 5)
        self.assertFalse(R.is_field)
        with self.assertRaises(InvalidInputError):
            R.inverse(4)

    def test_prime_field(self):
        K = prime_field(5)
        self.assertIsInstance(K, ModularRing)
        self.assertTrue(K.is_field)
        self.assertEqual(K.mul(2, K.inverse(2)), 1)
        with self.assertRaises(InvalidInputError):
            prime_field(9)

    def test_parse(self):
        self.assertEqual(integers().parse('2^3 - 1'), 7)
        self.assertEqual(modular(12).parse('-1'), 11)
        self.assertEqual(rationals().parse('1/2'), sp.Rational(1, 2))
        with self.assertRaises(InvalidInputError):
            integers().parse('x')
        with self.assertRaises(InvalidInputError):
            integers().parse('1/2')

    def test_helpers(self):
        Z = integers()
        self.assertEqual(Z.product([2, 3, 5]), 30)
        self.assertEqual(Z.product([]), 1)
        self.assertEqual(Z.total([2, 3]), 5)
        self.assertEqual(Z.linear_combination([1, -2], [6, 4]), -2)

    def test_element_order(self):
        self.assertEqual(list(integers().elements(2)), [0, 1, -1, 2, -2])
        self.assertEqual(list(modular(3).elements(10)), [0, 1, 2])
        R = univariate_poly('zp:2')
        self.assertEqual(list(R.elements(1)),
                         [R.zero, R.one, R.parse('x1'), R.parse('x1 + 1')])


class RadicalTest(unittest.TestCase):
    def test_integers(self):
        Z = integers()
        self.assertTrue(Z.radical_membership(6, [2]))
        self.assertFalse(Z.radical_membership(3, [2]))
        self.assertFalse(Z.radical_membership(2, [6]))
        self.assertTrue(Z.radical_membership(6, [2, 3]))
        self.assertTrue(Z.radical_membership(4, [2]))
        self.assertTrue(Z.radical_membership(0, []))
        self.assertFalse(Z.radical_membership(1, []))

    def test_modular(self):
        R = modular(12)
        self.assertTrue(R.radical_membership(6, [2]))
        self.assertTrue(R.radical_membership(6, [0]))
        self.assertFalse(R.radical_membership(2, [3]))

    def test_rationals(self):
        Q = rationals()
        self.assertTrue(Q.radical_membership(sp.Rational(5), [sp.Rational(1, 3)]))
        self.assertFalse(Q.radical_membership(sp.Rational(5), [sp.Rational(0)]))

    def test_univariate(self):
        R = univariate_poly('zp:5')
        x = R.parse('x1')
        self.assertTrue(R.radical_membership(x, [x**2]))
        self.assertFalse(R.radical_membership(x, [x**2 + 1]))
        self.assertTrue(R.radical_membership(x**2 + x, [x**3 * (x + 1)**2]))

    def test_multivariate(self):
        R = PolynomialRing('zp:5', 2)
        x1, x2 = R.gens
        self.assertTrue(R.radical_membership(x1 * x2, [x1**2 * x2**2]))
        self.assertFalse(R.radical_membership(x1, [x2]))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-60, 60), st.lists(st.integers(-60, 60), min_size=1, max_size=2))
    def test_integers_match_power_search(self, f, J):
        self.assertEqual(integers().radical_membership(f, J), power_search(integers(), f, J, max_power=6))

    def test_modular_matches_power_search(self):
        R = modular(12)
        for f, g in itertools.product(range(12), repeat=2):
            self.assertEqual(R.radical_membership(f, [g]), power_search(R, f, [g]), (f, g))


class IdealTest(unittest.TestCase):
    def test_membership_cofactors(self):
        for R, f, J in ((integers(), 2, [6, 10]), (modular(12), 3, [9]), (rationals(), sp.Rational(3), [sp.Rational(2)])):
            cofactors = R.ideal_membership(f, J)
            self.assertIsNotNone(cofactors)
            verify_cofactors(R, f, J, cofactors)
        self.assertIsNone(integers().ideal_membership(3, [6, 10]))

    def test_bad_cofactors(self):
        with self.assertRaises(CertificateError):
            verify_cofactors(integers(), 2, [6, 10], [1, 1])

    def test_saturation(self):
        self.assertEqual(integers().ideal_saturation([6], 2), [3])
        self.assertEqual(integers().ideal_saturation([12], 6), [1])
        self.assertEqual(integers().ideal_saturation([5], 0), [1])
        self.assertEqual(modular(12).ideal_saturation([0], 2), [3])
        R = univariate_poly('zp:5')
        x = R.parse('x1')
        self.assertEqual(R.ideal_saturation([x**2 * (x + 1)], x), [x + 1])

    def test_canonical_radical(self):
        self.assertEqual(integers().canonical_radical([12, 18]), (6,))
        self.assertEqual(integers().canonical_radical([0]), ())
        R = univariate_poly('zp:5')
        x = R.parse('x1')
        self.assertEqual(R.canonical_radical([2 * x**2]), (x,))
        P = PolynomialRing('q', 2)
        self.assertIsNone(P.canonical_radical([P.one]))


if __name__ == '__main__':
    unittest.main()
