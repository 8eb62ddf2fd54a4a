#!/usr/bin/env python3

"""Finite distributive lattices stored as downsets of a poset of join-irreducibles.

Elements are referred to by their index in `FiniteDistLattice.elements`, which
lists downset bitmasks sorted by (popcount, value). Index 0 is always the
bottom and the last index the top.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np

from krullkit.errors import (InvalidInputError, InvalidPosetError,
                             LatticeAxiomError, ResourceLimitError)
from krullkit.util import bits, is_subset, popcount, setting

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Poset:
    size: int
    covers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'covers', tuple(sorted(set(map(tuple, self.covers)))))

        if self.size < 0:
            raise InvalidPosetError(f'Negative poset size {self.size}')

        for lo, hi in self.covers:
            if not (0 <= lo < self.size and 0 <= hi < self.size):
                raise InvalidPosetError(f'Cover {(lo, hi)} out of range for {self.size} points')
            if lo == hi:
                raise InvalidPosetError(f'Cover {(lo, hi)} is a loop')

        # Touching down_masks runs the cycle check.
        down = self.down_masks

        for lo, hi in self.covers:
            for other, top in self.covers:
                if top == hi and other != lo and (down[other] >> lo) & 1:
                    raise InvalidPosetError(
                        f'Cover {(lo, hi)} is implied by {(lo, other)} and {(other, hi)}')

    @cached_property
    def lower_covers(self) -> tuple:
        lower = [[] for _ in range(self.size)]
        for lo, hi in self.covers:
            lower[hi].append(lo)
        return tuple(tuple(l) for l in lower)

    @cached_property
    def topological_order(self) -> tuple:
        indegree = [len(l) for l in self.lower_covers]
        upper = [[] for _ in range(self.size)]
        for lo, hi in self.covers:
            upper[lo].append(hi)

        ready = [p for p in range(self.size) if indegree[p] == 0]
        order = []
        while ready:
            p = ready.pop(0)
            order.append(p)
            for q in upper[p]:
                indegree[q] -= 1
                if indegree[q] == 0:
                    ready.append(q)

        if len(order) != self.size:
            raise InvalidPosetError('Cover relation has a cycle')
        return tuple(order)

    @cached_property
    def down_masks(self) -> tuple:
        'down_masks[p] is the bitmask of all points q <= p (p included).'
        down = [0] * self.size
        for p in self.topological_order:
            m = 1 << p
            for q in self.lower_covers[p]:
                m |= down[q]
            down[p] = m
        return tuple(down)

    def leq(self, p: int, q: int) -> bool:
        return bool((self.down_masks[q] >> p) & 1)

    def is_downset(self, mask: int) -> bool:
        return all(is_subset(self.down_masks[p], mask) for p in bits(mask))

    def downsets(self, limit: Optional[int] = None) -> list[int]:
        'All downsets, in no particular order. Raises ResourceLimitError past `limit`.'
        order = self.topological_order
        found = []

        def extend(i: int, mask: int):
            if i == len(order):
                found.append(mask)
                if limit is not None and len(found) > limit:
                    raise ResourceLimitError(
                        f'Poset with {self.size} points has more than {limit} downsets')
                return
            p = order[i]
            extend(i + 1, mask)
            if all((mask >> q) & 1 for q in self.lower_covers[p]):
                extend(i + 1, mask | (1 << p))

        extend(0, 0)
        return found

    def to_json(self) -> dict:
        return {'size': self.size, 'covers': [list(c) for c in self.covers]}

    @staticmethod
    def from_json(obj: dict) -> 'Poset':
        try:
            return Poset(int(obj['size']), tuple(tuple(c) for c in obj.get('covers', [])))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f'Malformed poset: {e}') from e


@dataclass(frozen=True)
class FiniteDistLattice:
    poset: Poset
    elements: tuple
    labels: Optional[tuple] = None

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.elements)}

    @cached_property
    def _label_index(self) -> dict:
        return {self.label(i): i for i in range(len(self))}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f'FiniteDistLattice({len(self)} elements, {self.poset.size} points)'

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def mask(self, a: int) -> int:
        return self.elements[a]

    def meet(self, a: int, b: int) -> int:
        return self.index[self.elements[a] & self.elements[b]]

    def join(self, a: int, b: int) -> int:
        return self.index[self.elements[a] | self.elements[b]]

    def leq(self, a: int, b: int) -> bool:
        return is_subset(self.elements[a], self.elements[b])

    def meet_all(self, xs: Iterable[int]) -> int:
        m = self.elements[self.top]
        for x in xs:
            m &= self.elements[x]
        return self.index[m]

    def join_all(self, xs: Iterable[int]) -> int:
        m = 0
        for x in xs:
            m |= self.elements[x]
        return self.index[m]

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return format(self.elements[a], 'x')

    def parse(self, name) -> int:
        'Resolves an element name (its label, or a hex bitset string) to its index.'
        if isinstance(name, int) and not isinstance(name, bool):
            if not 0 <= name < len(self):
                raise InvalidInputError(f'Element index {name} out of range')
            return name
        name = str(name)
        if name in self._label_index:
            return self._label_index[name]
        try:
            mask = int(name, 16)
        except ValueError:
            mask = None
        if mask is not None and mask in self.index:
            return self.index[mask]
        raise InvalidInputError(f'Unknown lattice element {name!r}')

    def parse_all(self, names: Iterable) -> tuple:
        return tuple(self.parse(n) for n in names)

    def to_json(self) -> dict:
        obj = {'poset': self.poset.to_json()}
        if self.labels is not None:
            obj['labels'] = {format(m, 'x'): l for m, l in zip(self.elements, self.labels)}
        return obj


@dataclass(frozen=True)
class PrimeIdealPoint:
    'A morphism L -> 2, given by the poset point p with phi(a) = 1 iff p is in a.'
    point: int
    kernel: frozenset

    def __call__(self, a: int) -> int:
        return 0 if a in self.kernel else 1


def _sort_masks(masks: Iterable[int]) -> tuple:
    return tuple(sorted(masks, key=lambda m: (popcount(m), m)))


def lattice_from_poset(p: Poset, max_elements: Optional[int] = None,
                       labels: Optional[dict] = None) -> FiniteDistLattice:
    'Birkhoff construction: the lattice of all downsets of p.'
    limit = setting('lattice.max_elements', max_elements)
    elements = _sort_masks(p.downsets(limit=limit))
    log.debug('Built lattice with %d elements from %d-point poset', len(elements), p.size)

    label_tuple = None
    if labels is not None:
        label_tuple = tuple(labels.get(m, format(m, 'x')) for m in elements)

    return FiniteDistLattice(p, elements, label_tuple)


def chain_lattice(k: int) -> FiniteDistLattice:
    'The k-element chain; its poset is a chain with k - 1 points.'
    if k < 1:
        raise InvalidInputError(f'A chain lattice needs at least one element, got {k}')
    return lattice_from_poset(Poset(k - 1, tuple((i, i + 1) for i in range(k - 2))))


def boolean_lattice(n: int) -> FiniteDistLattice:
    if n < 0:
        raise InvalidInputError(f'Negative number of atoms {n}')
    return lattice_from_poset(Poset(n))


def product(l1: FiniteDistLattice, l2: FiniteDistLattice) -> FiniteDistLattice:
    'Componentwise product; its poset is the disjoint union, l2 points shifted after l1.'
    n1 = l1.poset.size
    covers = l1.poset.covers + tuple((a + n1, b + n1) for a, b in l2.poset.covers)
    return lattice_from_poset(Poset(n1 + l2.poset.size, covers))


def product_index(l1: FiniteDistLattice, l2: FiniteDistLattice,
                  prod: FiniteDistLattice, a: int, b: int) -> int:
    'Index in `prod` of the pair (a, b).'
    return prod.index[l1.elements[a] | (l2.elements[b] << l1.poset.size)]


def heyting_implies(L: FiniteDistLattice, a: int, b: int) -> int:
    'The largest c with c & a <= b.'
    A, B = L.elements[a], L.elements[b]
    down = L.poset.down_masks
    result = 0
    for p in range(L.poset.size):
        if down[p] & A & ~B == 0:
            result |= 1 << p
    return L.index[result]


def heyting_not(L: FiniteDistLattice, a: int) -> int:
    return heyting_implies(L, a, L.bottom)


def join_irreducibles(L: FiniteDistLattice) -> list[int]:
    'Element indices of the join-irreducibles, one per poset point, in point order.'
    return [L.index[m] for m in L.poset.down_masks]


def spec_enumerate(L: FiniteDistLattice) -> list[PrimeIdealPoint]:
    '''All morphisms L -> 2. Sorted by decreasing kernel size (ties by point),
    which lists larger prime ideals before the ones they contain.'''
    points = []
    for p in range(L.poset.size):
        kernel = frozenset(i for i, m in enumerate(L.elements) if not (m >> p) & 1)
        points.append(PrimeIdealPoint(p, kernel))
    points.sort(key=lambda pt: (-len(pt.kernel), pt.point))
    return points


def represent(L: FiniteDistLattice, a: int) -> frozenset:
    'The set of points phi of Spec(L) with phi(a) = 1.'
    return frozenset(bits(L.elements[a]))


def _check_laws(n: int, meet: np.ndarray, join: np.ndarray):
    ar = np.arange(n)

    for name, op in (('meet', meet), ('join', join)):
        bad = np.nonzero(op[ar, ar] != ar)[0]
        if len(bad):
            raise LatticeAxiomError(f'{name} idempotence', (int(bad[0]),))
        bad = np.argwhere(op != op.T)
        if len(bad):
            raise LatticeAxiomError(f'{name} commutativity', tuple(int(i) for i in bad[0]))

    bad = np.argwhere(meet[ar[:, None], join] != ar[:, None])
    if len(bad):
        raise LatticeAxiomError('absorption', tuple(int(i) for i in bad[0]))
    bad = np.argwhere(join[ar[:, None], meet] != ar[:, None])
    if len(bad):
        raise LatticeAxiomError('absorption', tuple(int(i) for i in bad[0]))

    # Triple laws, one slice per first argument to keep memory quadratic.
    for a in range(n):
        for name, op in (('meet', meet), ('join', join)):
            lhs = op[op[a][:, None], ar[None, :]]
            rhs = op[a][op]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                raise LatticeAxiomError(f'{name} associativity', (a,) + tuple(int(i) for i in bad[0]))

        lhs = meet[a][join]
        rhs = join[meet[a][:, None], meet[a][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise LatticeAxiomError('distributivity of meet over join', (a,) + tuple(int(i) for i in bad[0]))

        lhs = join[a][meet]
        rhs = meet[join[a][:, None], join[a][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise LatticeAxiomError('distributivity of join over meet', (a,) + tuple(int(i) for i in bad[0]))


def validate_raw_lattice(elements: list, meet_table, join_table,
                         max_elements: Optional[int] = None) -> FiniteDistLattice:
    '''Checks the lattice and distributive laws on every triple of the given
    tables, then converts to the downset representation. Labels carry the
    original element names.'''
    n = len(elements)
    if n == 0:
        raise InvalidInputError('A lattice needs at least one element')
    if len(set(elements)) != n:
        raise InvalidInputError('Duplicate element names')
    if n > setting('lattice.max_elements', max_elements):
        raise ResourceLimitError(f'{n} elements exceed the lattice size cap')

    try:
        meet = np.asarray(meet_table, dtype=np.int64)
        join = np.asarray(join_table, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f'Malformed operation table: {e}') from e

    if meet.shape != (n, n) or join.shape != (n, n):
        raise InvalidInputError(f'Operation tables must be {n}x{n}')
    if meet.min() < 0 or join.min() < 0 or meet.max() >= n or join.max() >= n:
        raise InvalidInputError('Operation table entries out of range')

    try:
        _check_laws(n, meet, join)
    except LatticeAxiomError as e:
        raise LatticeAxiomError(e.law, e.triple, elements) from None

    # below[a, b] iff a & b == a
    below = meet == np.arange(n)[:, None]
    bottom = [z for z in range(n) if below[z].all()]
    top = [u for u in range(n) if below[:, u].all()]
    if not bottom or not top:
        raise LatticeAxiomError('bounds', ())

    irreducible = []
    for j in range(n):
        strictly_below = [x for x in range(n) if below[x, j] and x != j]
        acc = bottom[0]
        for x in strictly_below:
            acc = int(join[acc, x])
        if acc != j:
            irreducible.append(j)

    point_of = {j: i for i, j in enumerate(irreducible)}
    covers = []
    for a in irreducible:
        for b in irreducible:
            if a != b and below[a, b]:
                between = any(c not in (a, b) and below[a, c] and below[c, b] for c in irreducible)
                if not between:
                    covers.append((point_of[a], point_of[b]))
    poset = Poset(len(irreducible), tuple(covers))

    mask_of_element = {}
    for x in range(n):
        mask_of_element[x] = sum(1 << point_of[j] for j in irreducible if below[j, x])

    L = lattice_from_poset(poset, max_elements=max_elements,
                           labels={m: str(elements[x]) for x, m in mask_of_element.items()})
    if len(L) != n or len(set(mask_of_element.values())) != n:
        raise LatticeAxiomError('Birkhoff representation', ())
    return L


def load_lattice(obj: dict, max_elements: Optional[int] = None) -> FiniteDistLattice:
    'Reads either {"poset": ...} or the raw-table form {"elements", "meet", "join"}.'
    if 'poset' in obj:
        L = lattice_from_poset(Poset.from_json(obj['poset']), max_elements=max_elements)
        if 'labels' in obj:
            labels = {int(k, 16): v for k, v in obj['labels'].items()}
            L = FiniteDistLattice(L.poset, L.elements,
                                  tuple(labels.get(m, format(m, 'x')) for m in L.elements))
        return L
    if 'elements' in obj:
        names = list(obj['elements'])
        position = {name: i for i, name in enumerate(names)}

        def table(rows):
            try:
                return [[position[c] if isinstance(c, str) else int(c) for c in row] for row in rows]
            except KeyError as e:
                raise InvalidInputError(f'Unknown element {e} in operation table') from e

        return validate_raw_lattice(names, table(obj['meet']), table(obj['join']),
                                    max_elements=max_elements)
    raise InvalidInputError('Lattice JSON needs a "poset" or an "elements" key')


@dataclass(frozen=True)
class LatticeMorphism:
    'A map of element indices source -> target, given by its table.'
    source: FiniteDistLattice
    target: FiniteDistLattice
    table: tuple

    def __call__(self, a: int) -> int:
        return self.table[a]

    def is_homomorphism(self) -> bool:
        S, T = self.source, self.target
        if self.table[S.bottom] != T.bottom or self.table[S.top] != T.top:
            return False
        return all(self.table[S.meet(a, b)] == T.meet(self.table[a], self.table[b]) and
                   self.table[S.join(a, b)] == T.join(self.table[a], self.table[b])
                   for a in range(len(S)) for b in range(a + 1, len(S)))


def morphism_from_point_map(source: FiniteDistLattice, target: FiniteDistLattice,
                            point_map: Callable[[int], int]) -> LatticeMorphism:
    '''The lattice morphism dual to a monotone map from target points to
    source points: a |-> {q : point_map(q) in a}.'''
    images = [point_map(q) for q in range(target.poset.size)]
    for lo, hi in target.poset.covers:
        if not source.poset.leq(images[lo], images[hi]):
            raise InvalidInputError(f'Point map is not monotone on cover {(lo, hi)}')

    table = []
    for m in source.elements:
        image = 0
        for q, p in enumerate(images):
            if (m >> p) & 1:
                image |= 1 << q
        table.append(target.index[image])
    return LatticeMorphism(source, target, tuple(table))


def is_injective(h: LatticeMorphism) -> bool:
    return len(set(h.table)) == len(h.table)


def spec_pullback(h: LatticeMorphism) -> dict:
    'Spec(target) -> Spec(source), phi |-> phi . h, as a map of poset points.'
    source_points = {pt.kernel: pt.point for pt in spec_enumerate(h.source)}
    pullback = {}
    for pt in spec_enumerate(h.target):
        kernel = frozenset(a for a in range(len(h.source)) if h.table[a] in pt.kernel)
        pullback[pt.point] = source_points[kernel]
    return pullback


def find_isomorphism(l1: FiniteDistLattice, l2: FiniteDistLattice) -> Optional[LatticeMorphism]:
    'Searches for an isomorphism of the underlying posets and lifts it to the lattices.'
    p1, p2 = l1.poset, l2.poset
    if p1.size != p2.size or len(p1.covers) != len(p2.covers) or len(l1) != len(l2):
        return None

    def signature(p: Poset, i: int):
        return (popcount(p.down_masks[i]),
                sum(1 for q in range(p.size) if p.leq(i, q)))

    candidates = [[j for j in range(p2.size) if signature(p2, j) == signature(p1, i)]
                  for i in range(p1.size)]
    covers2 = set(p2.covers)
    mapping = [None] * p1.size
    used = set()

    def consistent(i: int) -> bool:
        for lo, hi in p1.covers:
            if lo <= i and hi <= i and (mapping[lo], mapping[hi]) not in covers2:
                return False
        return True

    def search(i: int) -> bool:
        if i == p1.size:
            return True
        for j in candidates[i]:
            if j in used:
                continue
            mapping[i] = j
            used.add(j)
            if consistent(i) and search(i + 1):
                return True
            used.discard(j)
        mapping[i] = None
        return False

    if not search(0):
        return None

    inverse = {j: i for i, j in enumerate(mapping)}
    return morphism_from_point_map(l1, l2, lambda q: inverse[q])


def distributivity_counterexample(L: FiniteDistLattice) -> Optional[tuple]:
    'Brute-force check of both distributive laws; None when they hold.'
    n = len(L)
    for a, b, c in itertools.product(range(n), repeat=3):
        if L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)):
            return (a, b, c)
        if L.join(a, L.meet(b, c)) != L.meet(L.join(a, b), L.join(a, c)):
            return (a, b, c)
    return None
