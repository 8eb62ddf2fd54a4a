#!/usr/bin/env python3

import itertools
import unittest
from unittest import mock

from hypothesis import given, settings
from hypothesis import strategies as st

from krullkit import instances
from krullkit.errors import CertificateError, InvalidInputError, ResourceLimitError
from krullkit.krull import (ChainWitness, IdealisticChain, IdealisticPrime, KrQuery, LatticeSequent,
                            chain_collapses, combine_collapse, compatible_prime_chain,
                            dimension_identity, dimension_witness, elementary_chain, kr_entails,
                            kr_entails_heyting, lattice_dim_leq, lattice_dimension,
                            prime_collapses, spectral_dimension)
from krullkit.lattice import boolean_lattice, chain_lattice, product


@st.composite
def seeded(draw):
    return instances.make_rng(draw(st.integers(min_value=0, max_value=2**32 - 1)))


def atoms(L):
    return [a for a in range(len(L)) if bin(L.mask(a)).count('1') == 1]


def at_level(levels: int, i: int, a: int, b: int) -> KrQuery:
    'phi_i(a) <= phi_i(b) in Kr_levels(L).'
    return KrQuery(levels, tuple((a,) if k == i else () for k in range(levels + 1)),
                   tuple((b,) if k == i else () for k in range(levels + 1)))


def subset(rng, L, max_size: int = 2) -> frozenset:
    return frozenset(int(x) for x in rng.integers(0, len(L), size=int(rng.integers(0, max_size + 1))))


class QueryTest(unittest.TestCase):
    def test_shape_is_checked(self):
        with self.assertRaises(InvalidInputError):
            KrQuery(1, ((0,),), ((0,), (1,)))
        with self.assertRaises(InvalidInputError):
            KrQuery(-1, (), ())
        with self.assertRaises(InvalidInputError):
            IdealisticChain(())

    def test_json(self):
        L = chain_lattice(3)
        q = KrQuery.from_json(L, {'levels': 1, 'U': [['1'], []], 'J': [[], ['1']]})
        self.assertEqual(q, KrQuery(1, ((1,), ()), ((), (1,))))
        self.assertEqual(q.to_json(L), {'levels': 1, 'U': [['1'], []], 'J': [[], ['1']]})
        with self.assertRaises(InvalidInputError):
            KrQuery.from_json(L, {'U': [], 'J': []})

    def test_level_zero_is_the_lattice_order(self):
        L = boolean_lattice(2)
        for a, b in itertools.product(range(len(L)), repeat=2):
            q = KrQuery(0, ((a,),), ((b,),))
            self.assertEqual(kr_entails(L, q) is not None, L.leq(a, b))
            self.assertEqual(kr_entails_heyting(L, q), L.leq(a, b))

    def test_elementary_chain_shape(self):
        c = elementary_chain([4, 7])
        self.assertEqual(c.levels, 2)
        self.assertEqual(c.pairs[0], IdealisticPrime((), (4,)))
        self.assertEqual(c.pairs[1], IdealisticPrime((4,), (7,)))
        self.assertEqual(c.pairs[2], IdealisticPrime((7,), ()))


class WitnessTest(unittest.TestCase):
    def test_chain_middle_does_not_collapse(self):
        # In 0 < m < 1 nothing with x & m = 0 has x | m = 1.
        L = chain_lattice(3)
        self.assertIsNone(kr_entails(L, KrQuery(1, ((1,), ()), ((), (1,)))))
        self.assertIsNone(chain_collapses(L, elementary_chain([1])))

    def test_boolean_atom_collapses(self):
        L = boolean_lattice(2)
        a, b = atoms(L)
        witness = chain_collapses(L, elementary_chain([a]))
        self.assertEqual(witness, ChainWitness((b,)))
        self.assertTrue(witness.verify(L, elementary_chain([a]).query()))

    def test_search_cap(self):
        L = chain_lattice(6)
        q = KrQuery(3, ((), (), (), ()), ((), (), (), ()))
        with self.assertRaises(ResourceLimitError):
            kr_entails(L, q, max_search=10)

    def test_parallel_search_agrees(self):
        L = product(chain_lattice(3), chain_lattice(2))
        for x in range(len(L)):
            q = elementary_chain([x]).query()
            self.assertEqual(kr_entails(L, q, workers=1), kr_entails(L, q, workers=2))

    def test_verify_rejects_bad_witnesses(self):
        L = boolean_lattice(2)
        a, b = atoms(L)
        q = elementary_chain([a]).query()
        self.assertFalse(ChainWitness((a,)).verify(L, q))
        self.assertFalse(ChainWitness((L.bottom,)).verify(L, q))
        self.assertFalse(ChainWitness((b, b)).verify(L, q))

    @settings(max_examples=25, deadline=None)
    @given(seeded(), st.integers(min_value=0, max_value=2))
    def test_level_maps_are_order_embeddings(self, rng, levels):
        L = instances.random_lattice(rng, max_elements=8)
        for i in range(levels + 1):
            order = {(a, b): kr_entails(L, at_level(levels, i, a, b)) is not None
                     for a, b in itertools.product(range(len(L)), repeat=2)}
            for (a, b), holds in order.items():
                self.assertEqual(holds, L.leq(a, b))
                if a != b:
                    self.assertFalse(holds and order[b, a])

    @settings(max_examples=40, deadline=None)
    @given(seeded())
    def test_witness_agrees_with_heyting(self, rng):
        L = instances.random_lattice(rng, max_elements=12)
        q = instances.random_query(rng, L, max_levels=2)
        witness = kr_entails(L, q)
        self.assertEqual(witness is not None, kr_entails_heyting(L, q))
        if witness is not None:
            self.assertTrue(witness.verify(L, q))

    @settings(max_examples=30, deadline=None)
    @given(seeded())
    def test_collapse_iff_no_compatible_primes(self, rng):
        L = instances.random_lattice(rng, max_elements=10)
        c = instances.random_chain(rng, L, max_levels=2)
        primes = compatible_prime_chain(L, c)
        self.assertEqual(chain_collapses(L, c) is None, primes is not None)
        if primes is not None:
            for pt, pair in zip(primes, c.pairs):
                self.assertTrue(all(j in pt.kernel for j in pair.J))
                self.assertFalse(any(u in pt.kernel for u in pair.U))


class CombineTest(unittest.TestCase):
    def setUp(self):
        self.L = boolean_lattice(2)
        self.a, self.b = atoms(self.L)

    def test_cut(self):
        L, a, b = self.L, self.a, self.b
        left = LatticeSequent(frozenset({a}), frozenset({a}))
        right = LatticeSequent(frozenset({L.top}), frozenset({a, b}))
        result = combine_collapse(L, left, right, a)
        self.assertEqual(result, LatticeSequent(frozenset({L.top}), frozenset({a, b})))

    def test_cut_element_must_appear(self):
        L, a, b = self.L, self.a, self.b
        left = LatticeSequent(frozenset({b}), frozenset({b}))
        right = LatticeSequent(frozenset({L.top}), frozenset({a, b}))
        with self.assertRaises(InvalidInputError):
            combine_collapse(L, left, right, a)

    def test_premises_must_hold(self):
        L, a, b = self.L, self.a, self.b
        left = LatticeSequent(frozenset({a}), frozenset({b}))
        right = LatticeSequent(frozenset({L.top}), frozenset({a, b}))
        with self.assertRaises(CertificateError):
            combine_collapse(L, left, right, a)

    @settings(max_examples=40, deadline=None)
    @given(seeded())
    def test_simultaneous_collapse(self, rng):
        L = instances.random_lattice(rng, max_elements=10)
        U, J = subset(rng, L), subset(rng, L)
        for x in range(len(L)):
            left, right = LatticeSequent(U | {x}, J), LatticeSequent(U, J | {x})
            if not (left.holds(L) and right.holds(L)):
                continue
            result = combine_collapse(L, left, right, x)
            self.assertEqual(result, LatticeSequent(U, J))
            self.assertTrue(prime_collapses(L, IdealisticPrime(tuple(J), tuple(U))))
            self.assertIsNotNone(kr_entails(L, KrQuery(0, (tuple(U),), (tuple(J),))))

    @settings(max_examples=30, deadline=None)
    @given(seeded())
    def test_simultaneous_collapse_of_chains(self, rng):
        L = instances.random_lattice(rng, max_elements=8)
        c = instances.random_chain(rng, L, max_levels=2)
        i = int(rng.integers(0, c.levels + 1))
        for x in range(len(L)):
            pairs = list(c.pairs)
            with_j = pairs[:i] + [IdealisticPrime(pairs[i].J + (x,), pairs[i].U)] + pairs[i + 1:]
            with_u = pairs[:i] + [IdealisticPrime(pairs[i].J, pairs[i].U + (x,))] + pairs[i + 1:]
            if (chain_collapses(L, IdealisticChain(tuple(with_j))) is not None and
                    chain_collapses(L, IdealisticChain(tuple(with_u))) is not None):
                self.assertIsNotNone(chain_collapses(L, c))


class DimensionTest(unittest.TestCase):
    def test_chains(self):
        for k in range(1, 7):
            L = chain_lattice(k)
            self.assertEqual(lattice_dimension(L), k - 2)
            self.assertEqual(spectral_dimension(L), k - 2)

    def test_boolean(self):
        self.assertEqual(lattice_dimension(boolean_lattice(0)), -1)
        for n in range(1, 4):
            self.assertEqual(lattice_dimension(boolean_lattice(n)), 0)

    def test_product_of_chains(self):
        for a, b in ((3, 3), (2, 4), (3, 4)):
            L = product(chain_lattice(a), chain_lattice(b))
            self.assertEqual(lattice_dimension(L), max(a, b) - 2)

    def test_bound_below_minus_one(self):
        with self.assertRaises(InvalidInputError):
            lattice_dim_leq(chain_lattice(2), -2)

    def test_minus_one_means_trivial(self):
        self.assertTrue(lattice_dim_leq(chain_lattice(1), -1).holds)
        self.assertFalse(lattice_dim_leq(chain_lattice(2), -1).holds)

    def test_report(self):
        report = lattice_dim_leq(chain_lattice(2), 0, record_witnesses=True)
        self.assertTrue(report.holds)
        self.assertEqual(report.sequences_checked, 2)
        self.assertEqual(len(report.witnesses), 2)

        report = lattice_dim_leq(chain_lattice(3), 0)
        self.assertFalse(report.holds)
        self.assertEqual(report.counterexample, (1,))

    def test_recorded_verdicts_are_cross_checked(self):
        with mock.patch('krullkit.krull.dimension_identity', return_value=False):
            with self.assertRaises(CertificateError):
                lattice_dim_leq(chain_lattice(2), 0, record_witnesses=True)

    def test_search_cap(self):
        with self.assertRaises(ResourceLimitError):
            lattice_dim_leq(chain_lattice(6), 3, record_witnesses=True, max_search=100)

    @settings(max_examples=30, deadline=None)
    @given(seeded())
    def test_greedy_witness_matches_identity(self, rng):
        L = instances.random_lattice(rng, max_elements=10)
        for length in (1, 2):
            for xs in itertools.product(range(len(L)), repeat=length):
                holds, witnesses = dimension_witness(L, xs)
                self.assertEqual(holds, dimension_identity(L, xs))
                self.assertEqual(holds, chain_collapses(L, elementary_chain(xs)) is not None)
                self.assertEqual(L.meet(witnesses[0], xs[0]), L.bottom)

    def test_long_chain_product(self):
        L = product(chain_lattice(1), chain_lattice(36))
        self.assertEqual(lattice_dimension(L), 34)
        self.assertTrue(lattice_dim_leq(L, 34).holds)
        self.assertFalse(lattice_dim_leq(L, 33).holds)

    @settings(max_examples=20, deadline=None)
    @given(seeded())
    def test_state_search_matches_enumeration(self, rng):
        L = instances.random_lattice(rng, max_elements=10)
        for d in range(3):
            fast = lattice_dim_leq(L, d)
            full = lattice_dim_leq(L, d, record_witnesses=True)
            self.assertEqual(fast.holds, full.holds)
            if not fast.holds:
                self.assertFalse(dimension_witness(L, fast.counterexample)[0])

    @settings(max_examples=20, deadline=None)
    @given(seeded())
    def test_dimension_matches_prime_chains(self, rng):
        L = instances.random_lattice(rng, max_elements=16)
        self.assertEqual(lattice_dimension(L), spectral_dimension(L))


if __name__ == '__main__':
    unittest.main()
