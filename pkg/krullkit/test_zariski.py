#!/usr/bin/env python3

import unittest

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from krullkit.errors import CertificateError
from krullkit.lattice import distributivity_counterexample
from krullkit.rings import PolynomialRing, integers, modular, univariate_poly, verify_cofactors
from krullkit.zariski import (ZarElem, canonical, element, prime_correspondence, zar_cut_certificate,
                              zar_entails, zar_eq, zar_implies, zar_implies_elem, zar_join, zar_leq,
                              zar_meet, zariski_lattice_mod)

small = st.integers(-30, 30)


class EntailmentTest(unittest.TestCase):
    def test_products(self):
        Z = integers()
        self.assertTrue(zar_entails(Z, [2, 3], [6]))
        self.assertTrue(zar_entails(Z, [], [1]))
        self.assertFalse(zar_entails(Z, [], []))
        self.assertTrue(zar_entails(Z, [0], []))
        self.assertFalse(zar_entails(Z, [2], [3]))

    @settings(max_examples=60, deadline=None)
    @given(small, small)
    def test_axioms(self, x, y):
        Z = integers()
        self.assertTrue(zar_entails(Z, [x, y], [x * y]))
        self.assertTrue(zar_entails(Z, [x * y], [x]))
        self.assertTrue(zar_entails(Z, [x + y], [x, y]))
        self.assertTrue(zar_entails(Z, [x], [x]))


class LatticeOperationTest(unittest.TestCase):
    def test_integer_join_and_meet(self):
        Z = integers()
        six, ten = element(6), element(10)
        self.assertEqual(canonical(Z, zar_join(six, ten)), element(2))
        self.assertEqual(canonical(Z, zar_meet(Z, six, ten)), element(30))
        self.assertTrue(zar_eq(Z, zar_meet(Z, six, ten), element(60)))
        self.assertTrue(zar_leq(Z, six, element(2)))
        self.assertFalse(zar_leq(Z, element(2), six))

    def test_empty_and_unit(self):
        Z = integers()
        self.assertTrue(zar_leq(Z, ZarElem(), element(7)))
        self.assertTrue(zar_eq(Z, element(1), element(-1)))
        self.assertEqual(canonical(Z, ZarElem()), ZarElem())
        self.assertEqual(element(6).format(Z), 'rad<6>')

    def test_univariate_canonical(self):
        R = univariate_poly('zp:5')
        x = R.parse('x1')
        z = canonical(R, element(x**2 * (x + 1), x**3))
        self.assertEqual(z, element(x))

    def test_multivariate_has_no_canonical_form(self):
        R = PolynomialRing('q', 2)
        z = element(R.gens[0] ** 2)
        self.assertEqual(canonical(R, z), z)


class ImplicationTest(unittest.TestCase):
    def test_integers(self):
        Z = integers()
        self.assertTrue(zar_eq(Z, zar_implies(Z, 2, element(6)), element(3)))
        self.assertTrue(zar_eq(Z, zar_implies(Z, 5, element(6)), element(6)))

    def test_two_variables(self):
        R = PolynomialRing('zp:5', 2)
        x, y = R.gens
        self.assertTrue(zar_eq(R, zar_implies(R, x, element(x * y)), element(y)))

    def test_implication_from_element(self):
        Z = integers()
        self.assertTrue(zar_eq(Z, zar_implies_elem(Z, element(2, 6), element(30)), element(15)))
        self.assertTrue(zar_eq(Z, zar_implies_elem(Z, element(2, 3), element(30)), element(30)))
        self.assertTrue(zar_eq(Z, zar_implies_elem(Z, ZarElem(), element(30)), element(1)))

    @settings(max_examples=60, deadline=None)
    @given(small, small, small)
    def test_residuation(self, m, x, z):
        Z = integers()
        M, target = element(m), element(z)
        self.assertEqual(zar_leq(Z, zar_meet(Z, M, element(x)), target),
                         zar_leq(Z, M, zar_implies(Z, x, target)))


class CutTest(unittest.TestCase):
    def test_cut(self):
        Z = integers()
        J = [12]
        cofactors = zar_cut_certificate(Z, J, 2, 3, 2, 5, 2, (1,), (1,))
        verify_cofactors(Z, 3 * 2**2, J, cofactors)

    def test_zero_exponent_keeps_cofactors(self):
        Z = integers()
        self.assertEqual(zar_cut_certificate(Z, [3], 0, 3, 2, 1, 1, (1,), (1,)), (1,))

    def test_bad_premise(self):
        with self.assertRaises(CertificateError):
            zar_cut_certificate(integers(), [12], 2, 3, 2, 5, 2, (2,), (1,))

    def test_polynomial_cut(self):
        R = univariate_poly('zp:5')
        x = R.parse('x1')
        a, m1, g = x, x + 1, x**2 + 2
        J = [R.mul(R.power(a, 2), m1), g]
        m2 = R.sub(g, R.mul(a, R.one))
        cofactors = zar_cut_certificate(R, J, 2, m1, a, R.one, m2, (R.one, R.zero), (R.zero, R.one))
        verify_cofactors(R, R.mul(m1, R.power(m2, 2)), J, cofactors)


class ModularLatticeTest(unittest.TestCase):
    def test_sizes(self):
        for n, size in ((4, 2), (6, 4), (12, 4), (30, 8)):
            Z = zariski_lattice_mod(n)
            self.assertEqual(len(Z.lattice), size)
            self.assertIsNone(distributivity_counterexample(Z.lattice))

    def test_element_lookup(self):
        Z = zariski_lattice_mod(12)
        self.assertEqual(Z.element_of(element(0)), Z.lattice.bottom)
        self.assertEqual(Z.element_of(element(1)), Z.lattice.top)
        self.assertEqual(Z.element_of(element(2)), Z.element_of(element(8)))
        self.assertTrue(modular(12).radical_membership(6, [2]))

    def test_prime_correspondence(self):
        for n in (4, 6, 12, 30):
            correspondence = prime_correspondence(n)
            self.assertEqual(sorted(correspondence), sp.primefactors(n))
            self.assertEqual(len(set(correspondence.values())), len(correspondence))


if __name__ == '__main__':
    unittest.main()
