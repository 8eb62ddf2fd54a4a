#!/usr/bin/env python3

import unittest

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from krullkit import instances
from krullkit.errors import InvalidInputError, ResourceLimitError
from krullkit.groebner import (buchberger, eliminate, field_domain, format_polynomial,
                               ideal_membership, is_groebner_basis, normal_form, parse_polynomial,
                               polynomial_ring, radical_membership, saturation)
from krullkit.rings import PolynomialRing, power_search


def combination(cofactors, gens, zero):
    return sum((c * g for c, g in zip(cofactors, gens)), zero)


class ParseTest(unittest.TestCase):
    def setUp(self):
        self.R = polynomial_ring(2, 'q')

    def test_round_trip(self):
        f = parse_polynomial('3*x1^2*x2 - x2 + 1', self.R)
        x1, x2 = self.R.gens
        self.assertEqual(f, 3 * x1**2 * x2 - x2 + 1)
        self.assertEqual(parse_polynomial(format_polynomial(f), self.R), f)

    def test_unknown_variable(self):
        with self.assertRaises(InvalidInputError):
            parse_polynomial('x3 + 1', self.R)
        with self.assertRaises(InvalidInputError):
            parse_polynomial('x1 +', self.R)

    def test_fields(self):
        self.assertEqual(field_domain('q'), sp.QQ)
        self.assertEqual(field_domain('zp:5'), sp.GF(5))
        self.assertEqual(field_domain('zp7'), sp.GF(7))
        self.assertEqual(field_domain(3), sp.GF(3))
        for bad in ('zp:4', 'r', 'zp:x'):
            with self.assertRaises(InvalidInputError):
                field_domain(bad)
        with self.assertRaises(InvalidInputError):
            polynomial_ring(0)


class BasisTest(unittest.TestCase):
    def setUp(self):
        self.R = polynomial_ring(2, 'q')
        self.x1, self.x2 = self.R.gens

    def test_division_identity(self):
        x1, x2 = self.x1, self.x2
        f = x1**2 * x2 + x1 * x2**2 + x2**2
        basis = (x1 * x2 - 1, x2**2 - 1)
        division = normal_form(f, basis)
        self.assertEqual(combination(division.quotients, basis, self.R.zero) + division.remainder, f)
        with self.assertRaises(InvalidInputError):
            normal_form(f, ())

    def test_basis_with_cofactors(self):
        x1, x2 = self.x1, self.x2
        gens = (x1**2 - x2, x1 * x2 - 1)
        gb = buchberger(gens)
        self.assertTrue(is_groebner_basis(gb.basis))
        for g, row in zip(gb.basis, gb.cofactors):
            self.assertEqual(combination(row, gb.generators, gb.ring.zero), g)

    def test_unit_ideal(self):
        x1, x2 = self.x1, self.x2
        gb = buchberger((x1, x1 + 1))
        self.assertTrue(gb.contains_one())
        self.assertEqual(gb.basis, (gb.ring.one,))

    def test_lex_basis(self):
        x1, x2 = self.x1, self.x2
        gb = buchberger((x1 - x2**2, x2**3 - 2), order='lex')
        self.assertEqual(gb.order, 'lex')
        self.assertTrue(is_groebner_basis(gb.basis))
        with self.assertRaises(InvalidInputError):
            buchberger((x1,), order='deglex')

    def test_caps(self):
        x1, x2 = self.x1, self.x2
        with self.assertRaises(ResourceLimitError):
            buchberger((x1**2 - x2, x1 * x2 - 1), max_basis=1)
        with self.assertRaises(ResourceLimitError):
            buchberger((x1**5 - x2,), max_degree=3)


class MembershipTest(unittest.TestCase):
    def setUp(self):
        self.R = polynomial_ring(2, 'q')
        self.x1, self.x2 = self.R.gens

    def test_member_with_cofactors(self):
        x1, x2 = self.x1, self.x2
        gens = (x1 * x2 - 1, x1 - 1)
        result = ideal_membership(x2 - 1, gens)
        self.assertTrue(result.member)
        self.assertEqual(combination(result.cofactors, gens, self.R.zero), x2 - 1)

    def test_non_member(self):
        x1, x2 = self.x1, self.x2
        self.assertFalse(ideal_membership(x1, (x1**2,)).member)
        self.assertTrue(ideal_membership(self.R.zero, (x1**2,)).member)

    def test_radical(self):
        x1, x2 = self.x1, self.x2
        self.assertTrue(radical_membership(x1 * x2, (x1**2 * x2**2,)))
        self.assertFalse(radical_membership(x1, (x2,)))
        self.assertTrue(radical_membership(x1 + x2, (x1, x2)))
        self.assertTrue(radical_membership(x1 + x2, (x1**2, x2**3)))
        self.assertFalse(radical_membership(x1, (x1 * x2,)))

    def test_saturation(self):
        x1, x2 = self.x1, self.x2
        sat = saturation((x1 * x2,), x1)
        self.assertTrue(ideal_membership(x2, sat.generators).member)
        for g in sat.generators:
            self.assertTrue(ideal_membership(g, (x2,)).member)
        self.assertEqual(saturation((x1 * x2,), self.R.zero).generators, (self.R.one,))

    def test_elimination(self):
        x1, x2 = self.x1, self.x2
        kept = eliminate((x1 - x2, x2**2 - 2), [x2])
        self.assertTrue(kept.generators)
        for g in kept.generators:
            self.assertTrue(all(m[1] == 0 for m in g.keys()))
        self.assertTrue(ideal_membership(x1**2 - 2, kept.generators).member)

    def test_elimination_of_empty_ideal(self):
        with self.assertRaises(InvalidInputError):
            eliminate((), [0])
        self.assertEqual(eliminate((), [0], ring=self.R).generators, ())


@st.composite
def small_ideals(draw):
    rng = instances.make_rng(draw(st.integers(min_value=0, max_value=2**32 - 1)))
    R = PolynomialRing('zp:5', 2)
    count = int(rng.integers(1, 3))
    J = [instances.random_polynomial(rng, R, max_degree=2) for _ in range(count)]
    return R, instances.random_polynomial(rng, R, max_degree=2), J


class OracleTest(unittest.TestCase):
    @settings(max_examples=25, deadline=None)
    @given(small_ideals())
    def test_members_carry_cofactors(self, case):
        R, f, J = case
        result = ideal_membership(f, J)
        if result.member:
            self.assertEqual(combination(result.cofactors, J, R.zero), f)

    @settings(max_examples=25, deadline=None)
    @given(small_ideals())
    def test_power_search_implies_radical(self, case):
        R, f, J = case
        if power_search(R, f, J, max_power=4):
            self.assertTrue(radical_membership(f, J))


if __name__ == '__main__':
    unittest.main()
