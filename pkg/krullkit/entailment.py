#!/usr/bin/env python3

"""Entailment relations on a finite generator set and the distributive lattice
they present.

Finite subsets of generators are bitmasks over `GeneratorSet.names`. An
element of the presented lattice is a `FreeLatticeElem`: a set of conjuncts
{A1, ..., An} standing for (&A1) | ... | (&An).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from krullkit.errors import CertificateError, InvalidInputError, ResourceLimitError
from krullkit.lattice import FiniteDistLattice, join_irreducibles, validate_raw_lattice
from krullkit.util import bits, is_subset, mask_of, popcount, setting

log = logging.getLogger(__name__)

NEGATION_PREFIX = '~'


@dataclass(frozen=True)
class GeneratorSet:
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, 'names', tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise InvalidInputError(f'Duplicate generator names in {self.names}')

    def __len__(self):
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInputError(f'Unknown generator {name!r}') from None

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self.index(n) for n in names)

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]


@dataclass(frozen=True)
class Sequent:
    lhs: int
    rhs: int

    def format(self, gens: GeneratorSet) -> str:
        return f'{", ".join(gens.names_of(self.lhs))} |- {", ".join(gens.names_of(self.rhs))}'


@dataclass(frozen=True)
class EntailmentAxioms:
    generators: GeneratorSet
    axioms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'axioms', tuple(self.axioms))
        full = self.generators.full
        for s in self.axioms:
            if not is_subset(s.lhs | s.rhs, full):
                raise InvalidInputError(f'Axiom {s} mentions generators outside the set')

    def sequent(self, lhs: Iterable[str], rhs: Iterable[str]) -> Sequent:
        return Sequent(self.generators.mask(lhs), self.generators.mask(rhs))

    @staticmethod
    def from_json(obj: dict) -> 'EntailmentAxioms':
        try:
            gens = GeneratorSet(tuple(obj['generators']))
            axioms = tuple(Sequent(gens.mask(a.get('lhs', [])), gens.mask(a.get('rhs', [])))
                           for a in obj.get('axioms', []))
        except (KeyError, TypeError, AttributeError) as e:
            raise InvalidInputError(f'Malformed axiom file: {e}') from e
        return EntailmentAxioms(gens, axioms)

    def to_json(self) -> dict:
        g = self.generators
        return {'generators': list(g.names),
                'axioms': [{'lhs': g.names_of(s.lhs), 'rhs': g.names_of(s.rhs)}
                           for s in self.axioms]}


def _subset_key(m: int):
    return (popcount(m), m)


@dataclass(frozen=True)
class FreeLatticeElem:
    conjuncts: tuple = ()

    @staticmethod
    def normalize(conjuncts: Iterable[int]) -> 'FreeLatticeElem':
        'Absorption normal form: drop supersets of other conjuncts, then sort.'
        unique = set(conjuncts)
        kept = [a for a in unique
                if not any(b != a and is_subset(b, a) for b in unique)]
        return FreeLatticeElem(tuple(sorted(kept, key=_subset_key)))

    @staticmethod
    def zero() -> 'FreeLatticeElem':
        return FreeLatticeElem(())

    @staticmethod
    def one() -> 'FreeLatticeElem':
        return FreeLatticeElem((0,))

    @staticmethod
    def generator(i: int) -> 'FreeLatticeElem':
        return FreeLatticeElem((1 << i,))

    @staticmethod
    def meet_of(mask: int) -> 'FreeLatticeElem':
        return FreeLatticeElem((mask,))

    @staticmethod
    def join_of(mask: int) -> 'FreeLatticeElem':
        return FreeLatticeElem.normalize(1 << i for i in bits(mask))

    def join(self, other: 'FreeLatticeElem') -> 'FreeLatticeElem':
        return FreeLatticeElem.normalize(self.conjuncts + other.conjuncts)

    def meet(self, other: 'FreeLatticeElem') -> 'FreeLatticeElem':
        return FreeLatticeElem.normalize(a | b for a in self.conjuncts for b in other.conjuncts)

    def format(self, gens: GeneratorSet) -> str:
        if not self.conjuncts:
            return '0'
        return ' | '.join('&'.join(gens.names_of(a)) or '1' for a in self.conjuncts)


def _check_size(ax: EntailmentAxioms, key: str, override: Optional[int]):
    bound = setting(key, override)
    if len(ax.generators) > bound:
        raise ResourceLimitError(
            f'{len(ax.generators)} generators exceed the bound {bound} ({key})')


class _Closure:
    'Memoised decision of the least entailment relation containing the axioms.'

    def __init__(self, ax: EntailmentAxioms):
        self.ax = ax
        self.full = ax.generators.full
        self.memo = {}

    def holds(self, lhs: int, rhs: int) -> bool:
        key = (lhs, rhs)
        if key in self.memo:
            return self.memo[key]

        if lhs & rhs or any(is_subset(s.lhs, lhs) and is_subset(s.rhs, rhs)
                            for s in self.ax.axioms):
            result = True
        else:
            free = self.full & ~(lhs | rhs)
            if not free:
                result = False
            else:
                # Cut on the first undecided generator.
                x = free & -free
                result = self.holds(lhs | x, rhs) and self.holds(lhs, rhs | x)

        self.memo[key] = result
        return result


def closure_decide(ax: EntailmentAxioms, q: Sequent,
                   max_generators: Optional[int] = None) -> bool:
    '''Decides whether q is in the least relation containing ax that is
    reflexive, monotone and closed under cut.'''
    _check_size(ax, 'entailment.max_closure_generators', max_generators)
    return _Closure(ax).holds(q.lhs, q.rhs)


def saturate(ax: EntailmentAxioms, max_generators: int = 4) -> frozenset:
    'Least fixpoint of reflexivity, monotonicity and cut over the full sequent space.'
    n = len(ax.generators)
    if n > max_generators:
        raise ResourceLimitError(f'Saturation over {n} generators exceeds the bound {max_generators}')

    subsets = range(1 << n)
    relation = {(a, b) for a in subsets for b in subsets
                if a & b or any(is_subset(s.lhs, a) and is_subset(s.rhs, b) for s in ax.axioms)}

    changed = True
    while changed:
        changed = False
        for a, b in itertools.product(subsets, repeat=2):
            if (a, b) in relation:
                continue
            monotone = (any((a & ~(1 << i), b) in relation for i in bits(a)) or
                        any((a, b & ~(1 << i)) in relation for i in bits(b)))
            cut = any((a | (1 << x), b) in relation and (a, b | (1 << x)) in relation
                      for x in range(n))
            if monotone or cut:
                relation.add((a, b))
                changed = True

    return frozenset(Sequent(a, b) for a, b in relation)


class _Precedes:
    'The inductive relation A < Y, memoised per target Y.'

    def __init__(self, ax: EntailmentAxioms):
        self.ax = ax
        self.memo = {}

    def holds(self, a: int, y: FreeLatticeElem) -> bool:
        key = (a, y)
        if key in self.memo:
            return self.memo[key]

        result = any(is_subset(b, a) for b in y.conjuncts)
        if not result:
            for s in self.ax.axioms:
                # Only axioms that add a new generator on every branch.
                if is_subset(s.lhs, a) and not (s.rhs & a):
                    if all(self.holds(a | (1 << i), y) for i in bits(s.rhs)):
                        result = True
                        break

        self.memo[key] = result
        return result


def prec_decide(ax: EntailmentAxioms, a: int, y: FreeLatticeElem) -> bool:
    return _Precedes(ax).holds(a, y)


def free_leq(ax: EntailmentAxioms, x: FreeLatticeElem, y: FreeLatticeElem,
             _prec: Optional[_Precedes] = None) -> bool:
    prec = _prec or _Precedes(ax)
    return all(prec.holds(a, y) for a in x.conjuncts)


@dataclass
class PresentedLattice:
    'Lattice operations on FreeLatticeElem under a fixed axiom set.'
    axioms: EntailmentAxioms
    _prec: _Precedes = field(init=False, repr=False)

    def __post_init__(self):
        self._prec = _Precedes(self.axioms)

    @property
    def bottom(self) -> FreeLatticeElem:
        return FreeLatticeElem.zero()

    @property
    def top(self) -> FreeLatticeElem:
        return FreeLatticeElem.one()

    def generator(self, name: str) -> FreeLatticeElem:
        return FreeLatticeElem.generator(self.axioms.generators.index(name))

    def meet(self, x, y):
        return x.meet(y)

    def join(self, x, y):
        return x.join(y)

    def meet_all(self, xs: Iterable[FreeLatticeElem]) -> FreeLatticeElem:
        acc = self.top
        for x in xs:
            acc = acc.meet(x)
        return acc

    def join_all(self, xs: Iterable[FreeLatticeElem]) -> FreeLatticeElem:
        acc = self.bottom
        for x in xs:
            acc = acc.join(x)
        return acc

    def leq(self, x: FreeLatticeElem, y: FreeLatticeElem) -> bool:
        return free_leq(self.axioms, x, y, self._prec)

    def eq(self, x: FreeLatticeElem, y: FreeLatticeElem) -> bool:
        return self.leq(x, y) and self.leq(y, x)


@dataclass
class EnumeratedLattice:
    'A materialised presented lattice plus the maps from generators and normal forms.'
    lattice: FiniteDistLattice
    axioms: EntailmentAxioms
    generators: dict
    classes: dict

    def element(self, x: FreeLatticeElem) -> int:
        return self.classes[FreeLatticeElem.normalize(x.conjuncts)]


def _antichains(n: int) -> list[FreeLatticeElem]:
    subsets = sorted(range(1 << n), key=_subset_key)
    found = []

    def extend(i: int, chosen: list):
        if i == len(subsets):
            found.append(FreeLatticeElem(tuple(chosen)))
            return
        extend(i + 1, chosen)
        s = subsets[i]
        if not any(is_subset(c, s) or is_subset(s, c) for c in chosen):
            extend(i + 1, chosen + [s])

    extend(0, [])
    return found


def free_lattice_enumerate(ax: EntailmentAxioms,
                           max_generators: Optional[int] = None) -> EnumeratedLattice:
    'Materialises the lattice presented by ax as a FiniteDistLattice.'
    _check_size(ax, 'entailment.max_enumerate_generators', max_generators)
    gens = ax.generators
    prec = _Precedes(ax)

    representatives: list[FreeLatticeElem] = []
    class_of = {}
    for x in _antichains(len(gens)):
        for k, r in enumerate(representatives):
            if free_leq(ax, x, r, prec) and free_leq(ax, r, x, prec):
                class_of[x] = k
                break
        else:
            class_of[x] = len(representatives)
            representatives.append(x)

    k = len(representatives)
    meet = [[class_of[representatives[i].meet(representatives[j])] for j in range(k)] for i in range(k)]
    join = [[class_of[representatives[i].join(representatives[j])] for j in range(k)] for i in range(k)]
    names = [r.format(gens) for r in representatives]
    log.info('Presented lattice on %d generators has %d elements', len(gens), k)

    L = validate_raw_lattice(names, meet, join)
    position = {L.label(i): i for i in range(len(L))}
    classes = {x: position[names[c]] for x, c in class_of.items()}
    generators = {name: classes[FreeLatticeElem.generator(i)] for i, name in enumerate(gens.names)}
    return EnumeratedLattice(L, ax, generators, classes)


def _as_lattice(L):
    if isinstance(L, EntailmentAxioms):
        return PresentedLattice(L)
    return L


def quotient_leq(L: Union[FiniteDistLattice, PresentedLattice, EntailmentAxioms],
                 J: Iterable, U: Iterable, a, b) -> bool:
    '''a <= b in the quotient of L forcing J to 0 and U to 1, i.e.
    a & (&U) <= b | (|J). Elements are indices for a FiniteDistLattice and
    FreeLatticeElem for a presented lattice.'''
    L = _as_lattice(L)
    lhs = L.meet(a, L.meet_all(U))
    rhs = L.join(b, L.join_all(J))
    return L.leq(lhs, rhs)


def conjugate_pair(L: FiniteDistLattice, J: Iterable[int], U: Iterable[int]) -> tuple:
    'The classes of 0 and 1 in L/(J = 0, U = 1), as sets of element indices.'
    J, U = tuple(J), tuple(U)
    elements = range(len(L))
    ideal = frozenset(x for x in elements if quotient_leq(L, J, U, x, L.bottom))
    filter_ = frozenset(x for x in elements if quotient_leq(L, J, U, L.top, x))

    for f in filter_:
        for x in elements:
            if L.meet(x, f) in ideal and x not in ideal:
                raise CertificateError(f'Ideal/filter not conjugate at ({x}, {f})')
    for i in ideal:
        for x in elements:
            if L.join(x, i) in filter_ and x not in filter_:
                raise CertificateError(f'Filter/ideal not conjugate at ({x}, {i})')

    return ideal, filter_


def presentation_of(L: FiniteDistLattice,
                    max_generators: Optional[int] = None) -> EntailmentAxioms:
    '''Generators-and-relations presentation of L over its join-irreducibles:
    every minimal sequent A |- B with &A <= |B in L and A, B disjoint.'''
    points = join_irreducibles(L)
    gens = GeneratorSet(tuple(L.label(j) for j in points))
    bound = setting('entailment.max_closure_generators', max_generators)
    if len(points) > bound:
        raise ResourceLimitError(f'{len(points)} join-irreducibles exceed the bound {bound}')

    def holds(a: int, b: int) -> bool:
        return L.leq(L.meet_all(points[i] for i in bits(a)),
                     L.join_all(points[i] for i in bits(b)))

    n = len(points)
    axioms = []
    for a, b in itertools.product(range(1 << n), repeat=2):
        if a & b or not holds(a, b):
            continue
        if any(holds(a & ~(1 << i), b) for i in bits(a)):
            continue
        if any(holds(a, b & ~(1 << i)) for i in bits(b)):
            continue
        axioms.append(Sequent(a, b))
    return EntailmentAxioms(gens, tuple(axioms))


def boolean_completion(ax: EntailmentAxioms) -> EntailmentAxioms:
    '''Presentation of the Boolean algebra generated by the presented lattice:
    generators doubled with barred copies "~x", plus x, ~x |- and |- x, ~x.'''
    names = ax.generators.names
    n = len(names)
    gens = GeneratorSet(names + tuple(NEGATION_PREFIX + x for x in names))
    axioms = list(ax.axioms)
    for i in range(n):
        pair = (1 << i) | (1 << (i + n))
        axioms.append(Sequent(pair, 0))
        axioms.append(Sequent(0, pair))
    return EntailmentAxioms(gens, tuple(axioms))


def is_boolean(L: FiniteDistLattice) -> bool:
    'A finite distributive lattice is Boolean iff its join-irreducibles form an antichain.'
    return not L.poset.covers
