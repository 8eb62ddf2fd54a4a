#!/usr/bin/env python3

"""Cross-checks between independent decision procedures.

Each check draws seeded random instances, compares two procedures (or a
procedure against known values) and reports how many instances agreed.
The Hydra runner in `acceptance.py` runs them at full size, the unit tests
with small counts.
"""

import itertools
import logging
from dataclasses import dataclass, field

from krullkit import instances
from krullkit.certificates import (algebraic_dependence, certificate_from_dependence,
                                   collapse_1_to_3, collapse_3_to_1, field_cert,
                                   integer_cert, search_certificate, verify_certificate)
from krullkit.entailment import (EntailmentAxioms, FreeLatticeElem, GeneratorSet,
                                 PresentedLattice, Sequent, boolean_completion,
                                 closure_decide, free_lattice_enumerate,
                                 is_boolean, presentation_of)
from krullkit.errors import KrullkitError
from krullkit.krull import (chain_collapses, compatible_prime_chain, kr_entails,
                            kr_entails_heyting, lattice_dimension, spectral_dimension)
from krullkit.lattice import boolean_lattice, chain_lattice, product
from krullkit.rings import (integers, modular, multivariate_poly, power_search,
                            prime_field, rationals, univariate_poly, verify_cofactors)
from krullkit.util import is_subset
from krullkit.zariski import zar_cut_certificate, zar_entails

log = logging.getLogger(__name__)

MAX_FAILURES = 10


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, success: bool, description: str = ''):
        self.total += 1
        if success:
            self.passed += 1
        elif len(self.failures) < MAX_FAILURES:
            self.failures.append(description)

    def merge(self, other: 'CheckResult') -> 'CheckResult':
        return CheckResult(self.name, self.passed + other.passed, self.total + other.total,
                           (self.failures + other.failures)[:MAX_FAILURES])

    def to_json(self) -> dict:
        return {'check': self.name, 'passed': self.passed, 'total': self.total,
                'ok': self.ok, 'failures': self.failures}


def _count_antichains(n: int) -> int:
    subsets = range(1 << n)
    count = 0
    for family in range(1 << (1 << n)):
        chosen = [s for s in subsets if (family >> s) & 1]
        if all(not is_subset(a, b) for a, b in itertools.permutations(chosen, 2)):
            count += 1
    return count


def check_free_lattice_sizes(seed: int = 0, count: int = 3) -> CheckResult:
    'Free distributive lattices on n <= count generators have as many elements as antichains.'
    result = CheckResult('free_lattice_sizes')
    for n in range(1, count + 1):
        ax = EntailmentAxioms(GeneratorSet(tuple(f'g{i}' for i in range(n))))
        size = len(free_lattice_enumerate(ax).lattice)
        expected = _count_antichains(n)
        result.record(size == expected, f'n={n}: {size} elements, {expected} antichains')
    return result


def check_conservativity(seed: int = 0, count: int = 200) -> CheckResult:
    'free_leq on &A <= |B agrees with closure_decide on A |- B.'
    rng = instances.make_rng(seed)
    result = CheckResult('conservativity')
    for _ in range(count):
        ax = instances.random_axioms(rng, max_generators=5)
        P = PresentedLattice(ax)
        full = ax.generators.full
        bad = [(a, b) for a, b in itertools.product(range(full + 1), repeat=2)
               if P.leq(FreeLatticeElem.meet_of(a), FreeLatticeElem.join_of(b))
               != closure_decide(ax, Sequent(a, b))]
        result.record(not bad, f'{ax.to_json()} disagrees on {bad[:3]}')
    return result


def check_dimensions(seed: int = 0, count: int = 100) -> CheckResult:
    'lattice_dimension against spectral_dimension and known values.'
    rng = instances.make_rng(seed)
    result = CheckResult('dimensions')

    def compare(L, what, expected=None):
        d, s = lattice_dimension(L), spectral_dimension(L)
        success = d == s and (expected is None or d == expected)
        result.record(success, f'{what}: witness {d}, spectral {s}, expected {expected}')

    for k in range(1, 7):
        compare(chain_lattice(k), f'chain {k}', k - 2)
    for n in range(0, 5):
        compare(boolean_lattice(n), f'boolean {n}', 0 if n else -1)
    for a, b in instances.product_chains(36):
        compare(product(chain_lattice(a), chain_lattice(b)), f'chain {a} x chain {b}',
                max(a, b) - 2)
    for _ in range(count):
        L = instances.random_lattice(rng, max_elements=16)
        compare(L, f'random poset {L.poset.to_json()}')
    return result


def check_kr_agreement(seed: int = 0, count: int = 500) -> CheckResult:
    'Witness search and the Heyting formula decide the same Kr_l queries.'
    rng = instances.make_rng(seed)
    result = CheckResult('kr_agreement')
    for _ in range(count):
        L = instances.random_lattice(rng, max_elements=12)
        q = instances.random_query(rng, L, max_levels=2)
        witness = kr_entails(L, q)
        heyting = kr_entails_heyting(L, q)
        success = (witness is not None) == heyting and (witness is None or witness.verify(L, q))
        result.record(success, f'{L.poset.to_json()} {q.to_json(L)}: witness {witness}, '
                               f'heyting {heyting}')
    return result


def check_nullstellensatz(seed: int = 0, count: int = 100) -> CheckResult:
    'An idealistic chain collapses iff no chain of primes is compatible with it.'
    rng = instances.make_rng(seed)
    result = CheckResult('nullstellensatz')
    for _ in range(count):
        L = instances.random_lattice(rng, max_elements=10)
        c = instances.random_chain(rng, L, max_levels=2)
        collapses = chain_collapses(L, c) is not None
        primes = compatible_prime_chain(L, c)
        result.record(collapses == (primes is None),
                      f'{L.poset.to_json()} {c}: collapses {collapses}, primes {primes}')
    return result


def check_ring_dimension(seed: int = 0, count: int = 100) -> CheckResult:
    '''Over GF(5): l + 1 polynomials in l variables are always singular, the
    variables themselves are never found singular, and the field and integer
    constructions always verify.'''
    rng = instances.make_rng(seed)
    result = CheckResult('ring_dimension')

    for i in range(count):
        R = multivariate_poly('zp:5', 2) if i % 2 else univariate_poly('zp:5')
        fs = [instances.random_polynomial(rng, R, max_degree=3) for _ in range(R.nvars + 1)]
        try:
            Q = algebraic_dependence(R, fs)
            c = certificate_from_dependence(R, Q, fs) if Q is not None else None
            success = c is not None and verify_certificate(R, fs, c)
        except KrullkitError as e:
            success, c = False, e
        result.record(success, f'{[R.format(f) for f in fs]}: {c}')

    for R in (univariate_poly('zp:5'), multivariate_poly('zp:5', 2)):
        found = search_certificate(R, R.gens)
        result.record(found.bounded, f'{R.name}: variables reported singular by {found.certificate}')

    for K in (prime_field(5), rationals()):
        for _ in range(count):
            x = K.from_int(instances.random_integer(rng, 20))
            result.record(verify_certificate(K, [x], field_cert(K, [x])), f'{K.name}: {x}')

    Z = integers()
    for _ in range(count):
        xs = [instances.random_integer(rng), instances.random_integer(rng)]
        result.record(verify_certificate(Z, xs, integer_cert(xs)), f'zz: {xs}')
    return result


def check_collapse_round_trip(seed: int = 0, count: int = 50) -> CheckResult:
    'Nested form -> triangular form -> nested form always verifies.'
    rng = instances.make_rng(seed)
    result = CheckResult('collapse_round_trip')
    rings = (integers(), univariate_poly('zp:5'))
    for i in range(count):
        R = rings[i % 2]
        data = instances.random_collapse_form1(rng, R, levels=int(rng.integers(0, 3)))
        try:
            back = collapse_3_to_1(R, collapse_1_to_3(R, data))
            success = back.verify(R)
        except KrullkitError as e:
            success, back = False, e
        result.record(success, f'{R.name}: {data.to_json(R)} -> {back}')
    return result


def _zariski_axioms(R, sample) -> list:
    x, y, z = sample(), sample(), sample()
    U, J = [sample()], [sample()]
    holds = [
        zar_entails(R, [R.zero], []),
        zar_entails(R, [], [R.one]),
        zar_entails(R, [x, y], [R.mul(x, y)]),
        zar_entails(R, [R.mul(x, y)], [x]),
        zar_entails(R, [R.add(x, y)], [x, y]),
        zar_entails(R, [x], [x]),
    ]
    if zar_entails(R, U, J):
        holds.append(zar_entails(R, U + [z], J + [x]))
    if zar_entails(R, U + [z], J) and zar_entails(R, U, J + [z]):
        holds.append(zar_entails(R, U, J))
    return holds


def _cut_instance(rng, R, sample) -> bool:
    '''Builds a^k m1 in <J> and m2 + a x in <J> with J = (a^k m1, g) and checks
    the combined cofactors for m1 m2^k.'''
    a, x, m1, g, d, e = (sample() for _ in range(6))
    k = int(rng.integers(0, 4))
    J = [R.mul(R.power(a, k), m1), g]
    m2 = R.sub(R.add(R.mul(e, J[0]), R.mul(d, g)), R.mul(a, x))
    cofactors = zar_cut_certificate(R, J, k, m1, a, x, m2, (R.one, R.zero), (e, d))
    verify_cofactors(R, R.mul(m1, R.power(m2, k)), J, cofactors)
    return True


def check_zariski(seed: int = 0, count: int = 500) -> CheckResult:
    'The axioms of Zar(R) on random elements, and the cut certificates re-verify.'
    rng = instances.make_rng(seed)
    result = CheckResult('zariski')
    rings = (integers(), modular(12), univariate_poly('zp:5'), multivariate_poly('zp:5', 2))
    samplers = [instances.element_sampler(rng, R) for R in rings]
    for i in range(count):
        R, sample = rings[i % len(rings)], samplers[i % len(rings)]
        holds = _zariski_axioms(R, sample)
        result.record(all(holds), f'{R.name}: axiom outcomes {holds}')
    for i in range(count // 5):
        R, sample = rings[i % len(rings)], samplers[i % len(rings)]
        try:
            success = _cut_instance(rng, R, sample)
        except KrullkitError as e:
            success = False
            log.debug('Cut instance failed on %s: %s', R.name, e)
        result.record(success, f'{R.name}: cut certificate rejected')
    return result


def check_groebner(seed: int = 0, count: int = 200, max_power: int = 6) -> CheckResult:
    '''Radical membership against bounded power search, and saturation
    against its membership characterization.'''
    rng = instances.make_rng(seed)
    result = CheckResult('groebner')
    rings = (multivariate_poly('zp:5', 2), multivariate_poly('q', 2))
    for i in range(count):
        R = rings[i % 2]
        J = [instances.random_polynomial(rng, R, max_degree=2)
             for _ in range(int(rng.integers(1, 3)))]
        f = instances.random_polynomial(rng, R, max_degree=2)
        radical = R.radical_membership(f, J)
        bounded = power_search(R, f, J, max_power=max_power)
        result.record(radical == bounded, f'{R.name}: {R.format(f)} in rad{[R.format(g) for g in J]}: '
                                          f'{radical} vs power search {bounded}')

        sat = R.ideal_saturation(J, f)
        contains_J = all(R.ideal_membership(g, sat) is not None for g in J)
        generators_ok = all(_killed_by_power(R, s, f, J, max_power) for s in sat)
        result.record(contains_J and generators_ok,
                      f'{R.name}: saturation of {[R.format(g) for g in J]} by {R.format(f)}')

        # <f^e h> : f^oo contains every h.
        e = int(rng.integers(1, 3))
        H = [instances.random_polynomial(rng, R, max_degree=1) for _ in range(2)]
        J_f = [R.mul(R.power(f, e), h) for h in H]
        sat_f = R.ideal_saturation(J_f, f)
        candidates = H + [instances.random_polynomial(rng, R, max_degree=2)]
        complete = all(R.ideal_membership(g, sat_f) is not None for g in candidates
                       if _killed_by_power(R, g, f, J_f, max_power))
        result.record(complete, f'{R.name}: saturation of {[R.format(g) for g in J_f]} '
                                f'by {R.format(f)} misses an element')
    return result


def _killed_by_power(R, g, f, J, max_power: int) -> bool:
    'g * f^k lies in <J> for some k <= max_power.'
    return any(R.ideal_membership(R.mul(g, R.power(f, k)), J) is not None
               for k in range(max_power + 1))


def check_boolean_completion(seed: int = 0, count: int = 50) -> CheckResult:
    '''The completion of the 3-chain has 4 elements; in random completions
    x & ~x = 0 and x | ~x = 1, and L embeds order-reflectingly.'''
    rng = instances.make_rng(seed)
    result = CheckResult('boolean_completion')

    completed = free_lattice_enumerate(boolean_completion(presentation_of(chain_lattice(3)))).lattice
    result.record(len(completed) == 4 and is_boolean(completed),
                  f'completion of chain 3 has {len(completed)} elements')

    for _ in range(count):
        L = instances.random_lattice(rng, max_elements=12, max_points=4)
        ax = presentation_of(L)
        B = PresentedLattice(boolean_completion(ax))
        n = len(ax.generators)

        complemented = all(
            B.eq(B.meet(FreeLatticeElem.generator(i), FreeLatticeElem.generator(i + n)), B.bottom) and
            B.eq(B.join(FreeLatticeElem.generator(i), FreeLatticeElem.generator(i + n)), B.top)
            for i in range(n))

        def embed(a: int) -> FreeLatticeElem:
            return FreeLatticeElem.join_of(L.elements[a])

        reflects = all(L.leq(a, b) == B.leq(embed(a), embed(b))
                       for a in range(len(L)) for b in range(len(L)))
        result.record(complemented and reflects, f'{L.poset.to_json()}: complemented {complemented}, '
                                                 f'order-reflecting {reflects}')
    return result


CHECKS = {
    'free_lattice_sizes': (check_free_lattice_sizes, 3),
    'conservativity': (check_conservativity, 200),
    'dimensions': (check_dimensions, 100),
    'kr_agreement': (check_kr_agreement, 500),
    'nullstellensatz': (check_nullstellensatz, 100),
    'ring_dimension': (check_ring_dimension, 100),
    'collapse_round_trip': (check_collapse_round_trip, 50),
    'zariski': (check_zariski, 500),
    'groebner': (check_groebner, 200),
    'boolean_completion': (check_boolean_completion, 50),
}


def run_check(name: str, seed: int = 0, count: int = None) -> CheckResult:
    try:
        fn, default = CHECKS[name]
    except KeyError:
        raise KeyError(f'Unknown check {name!r}; available: {", ".join(CHECKS)}') from None
    result = fn(seed=seed, count=default if count is None else count)
    log.info('%s: %d/%d', name, result.passed, result.total)
    return result
