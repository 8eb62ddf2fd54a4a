#!/usr/bin/env python3

"""Zariski lattice of a discrete ring: radicals of finitely generated ideals,
decided through the ring's radical-membership oracle."""

import itertools
import logging
import math
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import sympy as sp

from krullkit.errors import CertificateError
from krullkit.lattice import FiniteDistLattice, spec_enumerate, validate_raw_lattice
from krullkit.rings import ModularRing, RingOracle, modular, verify_cofactors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZarElem:
    'The radical of the ideal generated by `generators`.'
    generators: tuple = ()

    def format(self, R: RingOracle) -> str:
        return 'rad<' + ', '.join(R.format(g) for g in self.generators) + '>'


def element(*generators) -> ZarElem:
    return ZarElem(tuple(generators))


def zar_entails(R: RingOracle, U: Iterable, J: Iterable) -> bool:
    'U |- J in Zar(R): the product of U lies in the radical of <J>.'
    return R.radical_membership(R.product(U), list(J))


def zar_leq(R: RingOracle, z1: ZarElem, z2: ZarElem) -> bool:
    return all(R.radical_membership(g, list(z2.generators)) for g in z1.generators)


def zar_eq(R: RingOracle, z1: ZarElem, z2: ZarElem) -> bool:
    return zar_leq(R, z1, z2) and zar_leq(R, z2, z1)


def zar_join(z1: ZarElem, z2: ZarElem) -> ZarElem:
    return ZarElem(z1.generators + z2.generators)


def zar_meet(R: RingOracle, z1: ZarElem, z2: ZarElem) -> ZarElem:
    return ZarElem(tuple(R.mul(a, b) for a in z1.generators for b in z2.generators))


def canonical(R: RingOracle, z: ZarElem) -> ZarElem:
    'Canonical generators where the ring provides them (Z, K[x]); z unchanged otherwise.'
    gens = R.canonical_radical(list(z.generators))
    return z if gens is None else ZarElem(gens)


def zar_implies(R: RingOracle, x, z: ZarElem) -> ZarElem:
    'x~ -> z, the radical of (<z> : x^oo).'
    return ZarElem(tuple(R.ideal_saturation(list(z.generators), x)))


def zar_implies_elem(R: RingOracle, m: ZarElem, z: ZarElem) -> ZarElem:
    'm -> z as the meet of g~ -> z over the generators g of m.'
    result = ZarElem((R.one,))
    for g in m.generators:
        result = zar_meet(R, result, zar_implies(R, g, z))
    return result


def zar_cut_certificate(R: RingOracle, J: Sequence, k: int, m1, a, x, m2,
                        m1_cofactors: Sequence, m2_cofactors: Sequence) -> tuple:
    '''From a^k * m1 in <J> and m2 + a*x in <J> (both with cofactors) builds
    cofactors for m1 * m2^k, expanding m2^k = (-a*x + s)^k with s = m2 + a*x:

        e_j = (-x)^k c_j + d_j * sum_{i=1..k} C(k, i) s^(i-1) (-a*x)^(k-i) m1
    '''
    J = list(J)
    verify_cofactors(R, R.mul(R.power(a, k), m1), J, m1_cofactors)
    s = R.add(m2, R.mul(a, x))
    verify_cofactors(R, s, J, m2_cofactors)

    minus_ax = R.neg(R.mul(a, x))
    tail = R.total(R.mul(R.from_int(comb(k, i)),
                         R.mul(R.power(s, i - 1), R.mul(R.power(minus_ax, k - i), m1)))
                   for i in range(1, k + 1))
    head = R.power(R.neg(x), k)
    cofactors = tuple(R.add(R.mul(head, c), R.mul(d, tail))
                      for c, d in zip(m1_cofactors, m2_cofactors))

    target = R.mul(m1, R.power(m2, k))
    try:
        verify_cofactors(R, target, J, cofactors)
    except CertificateError as e:
        raise CertificateError(f'Cut certificate failed re-verification: {e}') from e
    return cofactors


@dataclass
class ZariskiLattice:
    ring: ModularRing
    lattice: FiniteDistLattice
    elements: tuple

    def element_of(self, z: ZarElem) -> int:
        for i, w in enumerate(self.elements):
            if zar_eq(self.ring, z, w):
                return i
        raise KeyError(z)


def zariski_lattice_mod(n: int) -> ZariskiLattice:
    '''Zar(Z/n) as a FiniteDistLattice. Its elements are the radicals of
    principal ideals generated by products of the primes dividing n.'''
    R = modular(n)
    primes = sp.primefactors(n)
    raw = [ZarElem((math.prod(S) % n,))
           for size in range(len(primes) + 1)
           for S in itertools.combinations(primes, size)]

    def lookup(z: ZarElem) -> int:
        return next(i for i, w in enumerate(raw) if zar_eq(R, z, w))

    k = len(raw)
    meet = [[lookup(zar_meet(R, raw[i], raw[j])) for j in range(k)] for i in range(k)]
    join = [[lookup(zar_join(raw[i], raw[j])) for j in range(k)] for i in range(k)]
    names = [z.format(R) for z in raw]
    L = validate_raw_lattice(names, meet, join)

    elements = [None] * len(L)
    for name, z in zip(names, raw):
        elements[L.parse(name)] = z
    log.info('Zar(Z/%d) has %d elements', n, len(L))
    return ZariskiLattice(R, L, tuple(elements))


def prime_correspondence(n: int) -> dict:
    '''Maps each prime p | n (the prime ideal pZ/n) to the point of
    Spec(Zar(Z/n)) whose kernel is {z : z inside pZ/n}. Raises
    CertificateError unless this is a bijection.'''
    Z = zariski_lattice_mod(n)
    R = Z.ring
    points = spec_enumerate(Z.lattice)
    correspondence = {}
    for p in sp.primefactors(n):
        kernel = frozenset(i for i, z in enumerate(Z.elements)
                           if all(R.ideal_membership(g, [p]) is not None for g in z.generators))
        matches = [pt.point for pt in points if pt.kernel == kernel]
        if len(matches) != 1:
            raise CertificateError(f'Prime {p}Z/{n} has {len(matches)} lattice counterparts')
        correspondence[p] = matches[0]

    if sorted(correspondence.values()) != sorted(pt.point for pt in points):
        raise CertificateError(f'Ring and lattice primes of Z/{n} do not correspond')
    return correspondence
