#!/usr/bin/env python3

"""Seeded random instances for the property tests and the acceptance runner."""

import itertools
import logging
from typing import Callable, Optional

import numpy as np

from krullkit.certificates import CollapseChain, CollapseForm1
from krullkit.entailment import EntailmentAxioms, GeneratorSet, Sequent
from krullkit.errors import ResourceLimitError
from krullkit.krull import IdealisticChain, IdealisticPrime, KrQuery
from krullkit.lattice import FiniteDistLattice, Poset, lattice_from_poset
from krullkit.rings import ModularRing, PolynomialRing, RingOracle

log = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_poset(rng: np.random.Generator, size: int, density: float = 0.4) -> Poset:
    'Random order on `size` points (i < j only if i < j as integers), given by its covers.'
    down = [1 << p for p in range(size)]
    for j in range(size):
        for i in range(j):
            if rng.random() < density:
                down[j] |= down[i]

    covers = []
    for j in range(size):
        below = [i for i in range(j) if (down[j] >> i) & 1]
        for i in below:
            if not any(k != i and (down[k] >> i) & 1 for k in below):
                covers.append((i, j))
    return Poset(size, tuple(covers))


def random_lattice(rng: np.random.Generator, max_elements: int = 16,
                   max_points: int = 5) -> FiniteDistLattice:
    'A random downset lattice with at most max_elements elements.'
    while True:
        size = int(rng.integers(0, max_points + 1))
        p = random_poset(rng, size, density=float(rng.uniform(0.1, 0.8)))
        try:
            return lattice_from_poset(p, max_elements=max_elements)
        except ResourceLimitError:
            continue


def random_axioms(rng: np.random.Generator, max_generators: int = 5,
                  max_axioms: int = 4) -> EntailmentAxioms:
    n = int(rng.integers(1, max_generators + 1))
    gens = GeneratorSet(tuple(f'g{i}' for i in range(n)))
    count = int(rng.integers(0, max_axioms + 1))
    axioms = []
    for _ in range(count):
        # Sparse sides keep most axioms non-trivial.
        lhs = sum(1 << i for i in range(n) if rng.random() < 0.35)
        rhs = sum(1 << i for i in range(n) if rng.random() < 0.35) & ~lhs
        axioms.append(Sequent(lhs, rhs))
    return EntailmentAxioms(gens, tuple(axioms))


def _subset(rng: np.random.Generator, L: FiniteDistLattice, max_size: int) -> tuple:
    k = int(rng.integers(0, max_size + 1))
    return tuple(int(x) for x in rng.integers(0, len(L), size=k))


def random_query(rng: np.random.Generator, L: FiniteDistLattice, max_levels: int = 2,
                 max_size: int = 2) -> KrQuery:
    levels = int(rng.integers(0, max_levels + 1))
    return KrQuery(levels,
                   tuple(_subset(rng, L, max_size) for _ in range(levels + 1)),
                   tuple(_subset(rng, L, max_size) for _ in range(levels + 1)))


def random_chain(rng: np.random.Generator, L: FiniteDistLattice, max_levels: int = 2,
                 max_size: int = 2) -> IdealisticChain:
    levels = int(rng.integers(0, max_levels + 1))
    return IdealisticChain(tuple(IdealisticPrime(_subset(rng, L, max_size), _subset(rng, L, max_size))
                                 for _ in range(levels + 1)))


def random_polynomial(rng: np.random.Generator, R: PolynomialRing, max_degree: int = 3,
                      density: float = 0.5):
    'Random element of R with total degree <= max_degree; coefficients drawn from 0..4 mod the field.'
    terms = {}
    for degree in range(max_degree + 1):
        for m in R.monomials(degree):
            if rng.random() < density:
                terms[m] = R.domain(int(rng.integers(0, 5)))
    return R.ring.from_dict({m: c for m, c in terms.items() if c})


def random_integer(rng: np.random.Generator, bound: int = 60) -> int:
    return int(rng.integers(-bound, bound + 1))


def element_sampler(rng: np.random.Generator, R: RingOracle) -> Callable:
    'A zero-argument sampler of small random elements of R.'
    if isinstance(R, PolynomialRing):
        return lambda: random_polynomial(rng, R, max_degree=2)
    if isinstance(R, ModularRing):
        return lambda: R.from_int(int(rng.integers(0, R.n)))
    return lambda: random_integer(rng, 12)


def random_collapse_form1(rng: np.random.Generator, R: RingOracle, levels: int,
                          sample: Optional[Callable] = None) -> CollapseForm1:
    '''A nested-form collapse u_0 (u_1 (... (u_l + j_l) ...) + j_1) + j_0 = 0:
    random u's and j's for the inner levels, and j_0 = -u_0 * inner put into
    J_0 with cofactor 1.'''
    sample = sample or element_sampler(rng, R)
    J, U, u_exponents, j_cofactors = [], [], [], []
    for _ in range(levels + 1):
        U.append((sample(),))
        u_exponents.append((int(rng.integers(0, 3)),))
        J.append((sample(),))
        j_cofactors.append((sample(),))

    # Value of the nested expression from level 1 inward.
    inner = None
    for i in reversed(range(1, levels + 1)):
        u = R.power(U[i][0], u_exponents[i][0])
        j = R.mul(j_cofactors[i][0], J[i][0])
        inner = R.add(u if inner is None else R.mul(u, inner), j)

    u0 = R.power(U[0][0], u_exponents[0][0])
    j0 = R.neg(u0 if inner is None else R.mul(u0, inner))
    J[0] = (j0,)
    j_cofactors[0] = (R.one,)

    form = CollapseForm1(CollapseChain(tuple(J), tuple(U)), tuple(u_exponents), tuple(j_cofactors))
    log.debug('Generated level-%d collapse', levels)
    return form


def product_chains(max_elements: int = 36) -> list[tuple]:
    'All (a, b) with 1 <= a <= b and a * b <= max_elements.'
    return [(a, b) for a, b in itertools.combinations_with_replacement(range(1, max_elements + 1), 2)
            if a * b <= max_elements]
