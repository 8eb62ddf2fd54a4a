#!/usr/bin/env python3

"""Order decisions in Kr_l(L), idealistic chains and their collapse, and the
Krull dimension of a finite distributive lattice.

Kr_l(L) itself is never built: a query U_0..U_l |- J_0..J_l is decided either
by searching witnesses x_1..x_l for the triangular system

    x_1, U_0 |- J_0
    x_{i+1}, U_i |- J_i, x_i
    U_l |- J_l, x_l

or by evaluating the Heyting expression u_l -> (j_l | (... (u_0 -> j_0))).
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from krullkit.errors import CertificateError, InvalidInputError, ResourceLimitError
from krullkit.lattice import (FiniteDistLattice, PrimeIdealPoint, heyting_implies,
                              heyting_not, join_irreducibles, spec_enumerate)
from krullkit.util import setting

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class KrQuery:
    levels: int
    U: tuple
    J: tuple

    def __post_init__(self):
        object.__setattr__(self, 'U', tuple(tuple(u) for u in self.U))
        object.__setattr__(self, 'J', tuple(tuple(j) for j in self.J))
        if self.levels < 0 or len(self.U) != self.levels + 1 or len(self.J) != self.levels + 1:
            raise InvalidInputError(
                f'A level-{self.levels} query needs {self.levels + 1} U and J sets')

    @staticmethod
    def from_json(L: FiniteDistLattice, obj: dict) -> 'KrQuery':
        try:
            return KrQuery(int(obj['levels']),
                           tuple(L.parse_all(u) for u in obj['U']),
                           tuple(L.parse_all(j) for j in obj['J']))
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f'Malformed query: {e}') from e

    def to_json(self, L: FiniteDistLattice) -> dict:
        return {'levels': self.levels,
                'U': [[L.label(x) for x in u] for u in self.U],
                'J': [[L.label(x) for x in j] for j in self.J]}


@dataclass(frozen=True)
class ChainWitness:
    xs: tuple

    def verify(self, L: FiniteDistLattice, q: KrQuery) -> bool:
        return len(self.xs) == q.levels and all(
            _level_holds(L, q, i, self.xs) for i in range(q.levels + 1))

    def to_json(self, L: FiniteDistLattice) -> list:
        return [L.label(x) for x in self.xs]


@dataclass(frozen=True)
class IdealisticPrime:
    J: tuple = ()
    U: tuple = ()


@dataclass(frozen=True)
class IdealisticChain:
    pairs: tuple

    def __post_init__(self):
        if not self.pairs:
            raise InvalidInputError('An idealistic chain needs at least one pair')

    @property
    def levels(self) -> int:
        return len(self.pairs) - 1

    def query(self) -> KrQuery:
        return KrQuery(self.levels, tuple(p.U for p in self.pairs), tuple(p.J for p in self.pairs))


def elementary_chain(xs: Sequence[int]) -> IdealisticChain:
    '''((0, x_1), (x_1, x_2), ..., (x_l, 1)) with the vacuous 0 and 1 dropped:
    (J_0, U_0) = ({}, {x_1}), (J_i, U_i) = ({x_i}, {x_{i+1}}), (J_l, U_l) = ({x_l}, {}).'''
    xs = tuple(xs)
    J = ((),) + tuple((x,) for x in xs)
    U = tuple((x,) for x in xs) + ((),)
    return IdealisticChain(tuple(IdealisticPrime(j, u) for j, u in zip(J, U)))


def _level_holds(L: FiniteDistLattice, q: KrQuery, i: int, xs: Sequence[int]) -> bool:
    lhs = L.meet_all(q.U[i])
    rhs = L.join_all(q.J[i])
    if i < q.levels:
        lhs = L.meet(lhs, xs[i])
    if i > 0:
        rhs = L.join(rhs, xs[i - 1])
    return L.leq(lhs, rhs)


def _search(L: FiniteDistLattice, q: KrQuery, top_choices: Iterable[int]) -> Optional[tuple]:
    'First witness with x_l drawn from top_choices, x_l outermost.'
    ell = q.levels
    xs = [None] * ell

    def fill(k: int) -> bool:
        # Chooses xs[k - 1] = x_k given x_{k+1}.., checking level k.
        if k == 0:
            return _level_holds(L, q, 0, xs)
        choices = top_choices if k == ell else range(len(L))
        for x in choices:
            xs[k - 1] = x
            if _level_holds(L, q, k, xs) and fill(k - 1):
                return True
        xs[k - 1] = None
        return False

    return tuple(xs) if fill(ell) else None


def _search_from(L: FiniteDistLattice, q: KrQuery, x_top: int) -> Optional[tuple]:
    return _search(L, q, (x_top,))


def kr_entails(L: FiniteDistLattice, q: KrQuery, max_search: Optional[int] = None,
               workers: Optional[int] = None) -> Optional[ChainWitness]:
    '''Returns the first witness chain (canonical order, x_l outermost) for the
    query, or None when &phi_i(U_i) <= |phi_i(J_i) fails in Kr_l(L).'''
    bound = setting('krull.max_search', max_search)
    if len(L) ** q.levels > bound:
        raise ResourceLimitError(
            f'Witness search over {len(L)}^{q.levels} chains exceeds the cap {bound}')

    if q.levels == 0:
        return ChainWitness(()) if _level_holds(L, q, 0, ()) else None

    workers = setting('krull.workers', workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search_from, L, q, x) for x in range(len(L))]
            found = [f.result() for f in futures]
        xs = next((w for w in found if w is not None), None)
    else:
        xs = _search(L, q, range(len(L)))

    if xs is None:
        log.debug('No witness for level-%d query', q.levels)
        return None

    witness = ChainWitness(xs)
    if not witness.verify(L, q):
        raise CertificateError(f'Witness {xs} fails its triangular system')
    return witness


def kr_entails_heyting(L: FiniteDistLattice, q: KrQuery) -> bool:
    'Evaluates 1 = u_l -> (j_l | (u_{l-1} -> (... (u_0 -> j_0)))).'
    value = heyting_implies(L, L.meet_all(q.U[0]), L.join_all(q.J[0]))
    for i in range(1, q.levels + 1):
        value = heyting_implies(L, L.meet_all(q.U[i]), L.join(L.join_all(q.J[i]), value))
    return value == L.top


def prime_collapses(L: FiniteDistLattice, p: IdealisticPrime) -> bool:
    return L.leq(L.meet_all(p.U), L.join_all(p.J))


def chain_collapses(L: FiniteDistLattice, c: IdealisticChain,
                    max_search: Optional[int] = None) -> Optional[ChainWitness]:
    return kr_entails(L, c.query(), max_search=max_search)


@dataclass(frozen=True)
class LatticeSequent:
    'U |- J over lattice elements, i.e. &U <= |J.'
    U: frozenset
    J: frozenset

    def holds(self, L: FiniteDistLattice) -> bool:
        return L.leq(L.meet_all(self.U), L.join_all(self.J))


def combine_collapse(L: FiniteDistLattice, left: LatticeSequent, right: LatticeSequent,
                     cut: int) -> LatticeSequent:
    'From x, U_0 |- J_0 and U_1 |- x, J_1 derives U_0, U_1 |- J_0, J_1 by cut on x.'
    if cut not in left.U or cut not in right.J:
        raise InvalidInputError(f'Cut element {L.label(cut)} must be on the left of the first '
                                'sequent and on the right of the second')
    if not left.holds(L):
        raise CertificateError('Left sequent does not hold')
    if not right.holds(L):
        raise CertificateError('Right sequent does not hold')

    result = LatticeSequent((left.U - {cut}) | right.U, left.J | (right.J - {cut}))
    if not result.holds(L):
        raise CertificateError('Cut produced a sequent that does not hold')
    return result


def dimension_witness(L: FiniteDistLattice, xs: Sequence[int]) -> tuple:
    '''Greedy a_1 = not x_1, a_{i+1} = x_{i+1} -> (a_i | x_i). Each a_i is the
    largest value allowed by its constraint, so the sequence admits a witness
    iff 1 = a_l | x_l. Returns (holds, as).'''
    a = heyting_not(L, xs[0])
    witnesses = [a]
    for prev, x in zip(xs, xs[1:]):
        a = heyting_implies(L, x, L.join(witnesses[-1], prev))
        witnesses.append(a)
    return L.join(witnesses[-1], xs[-1]) == L.top, tuple(witnesses)


def dimension_identity(L: FiniteDistLattice, xs: Sequence[int]) -> bool:
    'Checks 1 = x_l | (x_l -> (x_{l-1} | (... (x_1 | not x_1)))).'
    value = L.join(xs[0], heyting_not(L, xs[0]))
    for x in xs[1:]:
        value = L.join(x, heyting_implies(L, x, value))
    return value == L.top


@dataclass
class DimensionReport:
    dimension_bound: int
    holds: bool
    sequences_checked: int = 0
    counterexample: Optional[tuple] = None
    witnesses: list = field(default_factory=list)


def _next_states(L: FiniteDistLattice, states: dict, pool: Sequence[int]) -> tuple:
    '''One step of the greedy witness. The next a depends on the prefix only
    through s = a_i | x_i, so states maps each reachable s to the first
    sequence reaching it.'''
    reached, steps = {}, 0
    for s, xs in states.items():
        for x in pool:
            steps += 1
            t = L.join(x, heyting_implies(L, x, s))
            reached.setdefault(t, xs + (x,))
    return reached, steps


def _initial_states(L: FiniteDistLattice, pool: Sequence[int]) -> dict:
    states = {}
    for x in pool:
        states.setdefault(L.join(x, heyting_not(L, x)), (x,))
    return states


def lattice_dim_leq(L: FiniteDistLattice, d: int, generators: Optional[Sequence[int]] = None,
                    record_witnesses: bool = False,
                    max_search: Optional[int] = None) -> DimensionReport:
    '''Checks every sequence x_1..x_{d+1} (drawn from `generators`, default all
    of L) for a_1..a_{d+1} with a_1 & x_1 = 0, a_{i+1} & x_{i+1} <= a_i | x_i
    and 1 = a_{d+1} | x_{d+1}.

    By default only the states a_i | x_i reachable by the greedy witness are
    explored. With record_witnesses every sequence is enumerated (subject to
    the krull.max_search cap), its witnesses are kept and each verdict is
    checked against the implication identity.'''
    if d < -1:
        raise InvalidInputError(f'Dimension bound must be at least -1, got {d}')
    if d == -1:
        return DimensionReport(d, L.is_trivial())

    pool = tuple(range(len(L))) if generators is None else tuple(generators)
    report = DimensionReport(d, True)

    if not record_witnesses:
        states = _initial_states(L, pool)
        report.sequences_checked = len(pool)
        for _ in range(d):
            states, steps = _next_states(L, states, pool)
            report.sequences_checked += steps
        bad = next((xs for s, xs in states.items() if s != L.top), None)
        if bad is not None:
            report.holds = False
            report.counterexample = bad
        return report

    bound = setting('krull.max_search', max_search)
    if len(pool) ** (d + 1) > bound:
        raise ResourceLimitError(
            f'{len(pool)}^{d + 1} sequences exceed the search cap {bound}')

    for xs in itertools.product(pool, repeat=d + 1):
        report.sequences_checked += 1
        holds, witnesses = dimension_witness(L, xs)
        if holds != dimension_identity(L, xs):
            raise CertificateError(f'Witness search and the implication identity disagree on '
                                   f'{[L.label(x) for x in xs]}')
        report.witnesses.append((xs, witnesses if holds else None))
        if not holds:
            report.holds = False
            report.counterexample = xs
            break
    return report


def lattice_dimension(L: FiniteDistLattice) -> int:
    '''Least d with dim L <= d, over sequences of join-irreducibles: the number
    of greedy steps until every reachable state is 1, minus one.'''
    if L.is_trivial():
        return -1
    generators = join_irreducibles(L)
    states = _initial_states(L, generators)
    d = 0
    while any(s != L.top for s in states):
        if d > len(L):
            raise AssertionError('dimension search did not terminate')
        states, _ = _next_states(L, states, generators)
        d += 1
    log.info('Lattice with %d elements has dimension %d', len(L), d)
    return d


def spectral_dimension(L: FiniteDistLattice) -> int:
    'Longest strictly increasing chain of prime ideals, minus one.'
    points = spec_enumerate(L)
    # Larger kernels come first, so walk in reverse to extend chains upward.
    longest = {}
    for pt in reversed(points):
        longest[pt.point] = 1 + max((longest[q.point] for q in points
                                     if q.point in longest and q.kernel < pt.kernel), default=0)
    return max(longest.values(), default=0) - 1


def compatible_prime_chain(L: FiniteDistLattice, c: IdealisticChain) -> Optional[tuple]:
    '''Primes P_0 <= ... <= P_l with J_i inside P_i and U_i outside P_i, or
    None. Exists iff the chain does not collapse.'''
    points = sorted(spec_enumerate(L), key=lambda pt: (len(pt.kernel), pt.point))

    def fits(pt: PrimeIdealPoint, pair: IdealisticPrime) -> bool:
        return (all(j in pt.kernel for j in pair.J) and
                not any(u in pt.kernel for u in pair.U))

    chain = []

    def extend(i: int) -> bool:
        if i == len(c.pairs):
            return True
        for pt in points:
            if chain and not chain[-1].kernel <= pt.kernel:
                continue
            if fits(pt, c.pairs[i]):
                chain.append(pt)
                if extend(i + 1):
                    return True
                chain.pop()
        return False

    return tuple(chain) if extend(0) else None
