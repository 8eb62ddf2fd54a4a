#!/usr/bin/env python3

"""Krull-dimension certificates for rings.

A sequence x_1..x_l is singular when some exponents m and elements a satisfy

    x_1^m_1 (... (x_l^m_l (1 + a_l x_l) + a_{l-1} x_{l-1}) ... + a_1 x_1) = 0.

This module verifies, searches and extracts such certificates, and converts
collapse data of idealistic chains between the nested form
u_0 (u_1 (... (u_l + j_l) ...) + j_1) + j_0 = 0 and the triangular form
x_{i+1}^k u_i in <J_i> + <x_i>.
"""

import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import sympy as sp
from sympy.polys.rings import PolyElement, PolyRing

from krullkit import groebner
from krullkit.errors import CertificateError, InvalidInputError
from krullkit.rings import PolynomialRing, RingOracle, integers
from krullkit.util import setting

log = logging.getLogger(__name__)

STRATEGIES = ('membership', 'enumerate')


@dataclass(frozen=True)
class SingularityCertificate:
    m: tuple
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, 'm', tuple(int(e) for e in self.m))
        object.__setattr__(self, 'a', tuple(self.a))
        if len(self.m) != len(self.a):
            raise InvalidInputError(f'{len(self.m)} exponents but {len(self.a)} coefficients')
        if any(e < 0 for e in self.m):
            raise InvalidInputError(f'Negative exponent in {self.m}')

    def to_json(self, R: RingOracle) -> dict:
        return {'m': list(self.m), 'a': [R.format(a) for a in self.a]}

    @staticmethod
    def from_json(R: RingOracle, obj: dict) -> 'SingularityCertificate':
        try:
            return SingularityCertificate(tuple(obj['m']), tuple(R.parse(a) for a in obj['a']))
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f'Malformed certificate: {e}') from e


def nested_value(R: RingOracle, xs: Sequence, c: SingularityCertificate):
    if len(xs) != len(c.m):
        raise InvalidInputError(f'Certificate of arity {len(c.m)} for {len(xs)} elements')
    value = R.one
    for i in reversed(range(len(xs))):
        inner = R.add(R.one, R.mul(c.a[i], xs[i])) if i == len(xs) - 1 \
            else R.add(value, R.mul(c.a[i], xs[i]))
        value = R.mul(R.power(xs[i], c.m[i]), inner)
    return value


def verify_certificate(R: RingOracle, xs: Sequence, c: SingularityCertificate) -> bool:
    return R.is_zero(nested_value(R, xs, c))


def _checked(R: RingOracle, xs: Sequence, c: SingularityCertificate) -> SingularityCertificate:
    if not verify_certificate(R, xs, c):
        raise CertificateError(f'Certificate m={c.m} fails on the sequence')
    return c


@dataclass(frozen=True)
class SearchBounds:
    max_exponent: int
    coefficient_bound: int
    hard_cap: int
    strategy: str = 'membership'

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidInputError(f'Unknown search strategy {self.strategy!r}')

    @staticmethod
    def from_config(**overrides) -> 'SearchBounds':
        return SearchBounds(**{key: setting(f'ring.search.{key}', overrides.get(key))
                               for key in ('max_exponent', 'coefficient_bound',
                                           'hard_cap', 'strategy')})


@dataclass
class SearchResult:
    certificate: Optional[SingularityCertificate]
    exponent_bound: int
    candidates: int = 0

    @property
    def bounded(self) -> bool:
        'True when nothing was found within the bounds (pseudo-regular so far).'
        return self.certificate is None


def exponent_vectors(ell: int, bound: int, above: int = -1) -> list:
    'Vectors in [0, bound]^ell with some entry > above, by total degree then lex.'
    vectors = [m for m in itertools.product(range(bound + 1), repeat=ell)
               if max(m, default=0) > above]
    return sorted(vectors, key=lambda m: (sum(m), m))


def _try_membership(R: RingOracle, xs: Sequence, m: tuple) -> Optional[SingularityCertificate]:
    # The identity is x^m + sum_i a_i * x_i * prod_{k <= i} x_k^m_k = 0, linear in a.
    prefix = R.one
    gens = []
    for x, e in zip(xs, m):
        prefix = R.mul(prefix, R.power(x, e))
        gens.append(R.mul(x, prefix))
    cofactors = R.ideal_membership(prefix, gens)
    if cofactors is None:
        return None
    return SingularityCertificate(m, tuple(R.neg(c) for c in cofactors))


def _try_enumerate(R: RingOracle, xs: Sequence, m: tuple, coefficients: list):
    for a in itertools.product(coefficients, repeat=len(xs)):
        c = SingularityCertificate(m, a)
        if verify_certificate(R, xs, c):
            return c
    return None


def search_certificate(R: RingOracle, xs: Sequence, bounds: Optional[SearchBounds] = None,
                       **overrides) -> SearchResult:
    '''Bounded search for a singularity certificate. Exponent vectors are tried
    by total degree then lex; the exponent bound doubles up to the hard cap.
    Returns a bounded result (certificate None) when nothing is found.'''
    bounds = bounds or SearchBounds.from_config(**overrides)
    xs = tuple(xs)
    coefficients = None
    if bounds.strategy == 'enumerate':
        coefficients = list(R.elements(bounds.coefficient_bound))

    bound, searched, candidates = bounds.max_exponent, -1, 0
    while True:
        for m in exponent_vectors(len(xs), bound, above=searched):
            candidates += 1
            if bounds.strategy == 'membership':
                c = _try_membership(R, xs, m)
            else:
                c = _try_enumerate(R, xs, m, coefficients)
            if c is not None:
                log.info('Singularity certificate found at m=%s after %d candidates', m, candidates)
                return SearchResult(_checked(R, xs, c), bound, candidates)
        searched = bound
        if bound >= bounds.hard_cap:
            break
        bound = min(2 * bound, bounds.hard_cap)

    log.warning('No singularity certificate with exponents up to %d', bound)
    return SearchResult(None, bound, candidates)


def evaluate(R: RingOracle, Q: PolyElement, xs: Sequence):
    'Q(x_1..x_l) computed in R.'
    if Q.ring.ngens != len(xs):
        raise InvalidInputError(f'Polynomial in {Q.ring.ngens} variables at {len(xs)} points')
    total = R.zero
    for monom, coeff in Q.items():
        term = R.from_ground(coeff)
        for x, e in zip(xs, monom):
            term = R.mul(term, R.power(x, e))
        total = R.add(total, term)
    return total


def dependence_ring(domain, ell: int) -> PolyRing:
    return PolyRing(','.join(f'y{i + 1}' for i in range(ell)), domain, 'lex')


def certificate_from_dependence(R: RingOracle, Q: PolyElement, xs: Sequence) -> SingularityCertificate:
    '''Reads a certificate off a relation Q(xs) = 0: the lex-least monomial
    y^m of Q gives the exponents, and every other monomial is assigned to the
    first position where it exceeds m.'''
    if not Q:
        raise InvalidInputError('The zero polynomial is not a dependence relation')
    xs = tuple(xs)
    if not R.is_zero(evaluate(R, Q, xs)):
        raise InvalidInputError('Q does not vanish on the sequence')

    K = Q.ring.domain
    ell = Q.ring.ngens
    m = min(Q.keys())
    Q = Q.mul_ground(K.quo(K.one, Q[m]))

    a = [R.zero] * ell
    for monom, coeff in Q.items():
        if monom == m:
            continue
        i = next(k for k in range(ell) if monom[k] != m[k])
        # Remaining factor y_i^(e_i - m_i - 1) * prod_{k > i} y_k^e_k.
        term = R.from_ground(coeff)
        term = R.mul(term, R.power(xs[i], monom[i] - m[i] - 1))
        for k in range(i + 1, ell):
            term = R.mul(term, R.power(xs[k], monom[k]))
        a[i] = R.add(a[i], term)

    return _checked(R, xs, SingularityCertificate(m, tuple(a)))


def algebraic_dependence(R: PolynomialRing, fs: Sequence, max_degree: Optional[int] = None) -> Optional[PolyElement]:
    '''A nonzero Q with Q(fs) = 0, obtained by eliminating the x variables from
    <y_i - f_i>, or None when the fs are algebraically independent.'''
    fs = tuple(fs)
    n = R.nvars
    if len(fs) > n + 1:
        raise InvalidInputError(f'{len(fs)} polynomials in {n} variables; at most {n + 1} supported')
    max_degree = setting('ring.dependence.max_degree', max_degree)

    ys = [sp.Symbol(f'y{i + 1}') for i in range(len(fs))]
    S = PolyRing(tuple(R.ring.symbols) + tuple(ys), R.domain, 'lex')
    up = list(range(n))
    lifted = [S.gens[n + i] - groebner.transfer(f, S, up) for i, f in enumerate(fs)]
    elim = groebner.eliminate(lifted, range(n), ring=S, max_degree=max_degree)

    T = dependence_ring(R.domain, len(fs))
    down = [None] * n + list(range(len(fs)))
    relations = [groebner.transfer(g, T, down) for g in elim.generators if g]
    if not relations:
        log.debug('Polynomials are algebraically independent')
        return None

    Q = min(relations, key=lambda g: (groebner.total_degree(g), len(g), T.order(g.LM))).monic()
    if not R.is_zero(evaluate(R, Q, fs)):
        raise CertificateError('Elimination produced a relation that does not vanish')
    return Q


def field_cert(K: RingOracle, xs: Sequence) -> SingularityCertificate:
    'dim K <= 0: x = 0 gives m = 1, otherwise 1 + (-1/x) x = 0.'
    if len(xs) != 1:
        raise InvalidInputError(f'Field certificates take one element, got {len(xs)}')
    x = xs[0]
    if K.is_zero(x):
        c = SingularityCertificate((1,), (K.zero,))
    else:
        c = SingularityCertificate((0,), (K.neg(K.inverse(x)),))
    return _checked(K, xs, c)


def integer_cert(xs: Sequence[int], R: Optional[RingOracle] = None) -> SingularityCertificate:
    '''dim Z <= 1. Splits x_1 = u*v with u made of the primes shared with x_2,
    takes m_2 with u | x_2^m_2 and a_2 with v | 1 + a_2 x_2, then
    a_1 = -x_2^m_2 (1 + a_2 x_2) / x_1.'''
    R = R or integers()
    if len(xs) != 2:
        raise InvalidInputError(f'Integer certificates take two elements, got {len(xs)}')
    x1, x2 = int(xs[0]), int(xs[1])
    if x1 == 0:
        return _checked(R, xs, SingularityCertificate((1, 0), (0, 0)))

    u = 1
    for p, e in sp.factorint(abs(x1)).items():
        if x2 % p == 0:
            u *= p ** e
    v = x1 // u

    m2 = 0
    while pow(x2, m2) % u:
        m2 += 1
    a2 = 0 if abs(v) == 1 else -sp.mod_inverse(x2, abs(v))
    a1 = -(x2 ** m2 * (1 + a2 * x2)) // x1
    return _checked(R, xs, SingularityCertificate((0, m2), (a1, a2)))


@dataclass(frozen=True)
class CollapseChain:
    'Ring elements J_i (ideal side) and U_i (monoid side) for levels 0..l.'
    J: tuple
    U: tuple

    def __post_init__(self):
        object.__setattr__(self, 'J', tuple(tuple(j) for j in self.J))
        object.__setattr__(self, 'U', tuple(tuple(u) for u in self.U))
        if not self.J or len(self.J) != len(self.U):
            raise InvalidInputError('A collapse chain needs matching, nonempty J and U levels')

    @property
    def levels(self) -> int:
        return len(self.J) - 1

    def to_json(self, R: RingOracle) -> dict:
        return {'J': [[R.format(x) for x in j] for j in self.J],
                'U': [[R.format(x) for x in u] for u in self.U]}

    @staticmethod
    def from_json(R: RingOracle, obj: dict) -> 'CollapseChain':
        return CollapseChain(tuple(tuple(R.parse(x) for x in j) for j in obj['J']),
                             tuple(tuple(R.parse(x) for x in u) for u in obj['U']))


def _monoid(R: RingOracle, gens: Sequence, exponents: Sequence[int]):
    if len(gens) != len(exponents):
        raise InvalidInputError(f'{len(exponents)} exponents for {len(gens)} monoid generators')
    return R.product(R.power(g, e) for g, e in zip(gens, exponents))


@dataclass(frozen=True)
class CollapseForm1:
    'u_0 (u_1 (... (u_l + j_l) ...) + j_1) + j_0 = 0 with u_i in M(U_i), j_i in <J_i>.'
    chain: CollapseChain
    u_exponents: tuple
    j_cofactors: tuple

    def u(self, R: RingOracle, i: int):
        return _monoid(R, self.chain.U[i], self.u_exponents[i])

    def j(self, R: RingOracle, i: int):
        return R.linear_combination(self.j_cofactors[i], self.chain.J[i])

    def value(self, R: RingOracle):
        v = R.one
        for i in reversed(range(self.chain.levels + 1)):
            v = R.add(R.mul(self.u(R, i), v), self.j(R, i))
        return v

    def verify(self, R: RingOracle) -> bool:
        levels = self.chain.levels + 1
        if len(self.u_exponents) != levels or len(self.j_cofactors) != levels:
            return False
        return R.is_zero(self.value(R))

    def to_json(self, R: RingOracle) -> dict:
        return {'form': 1, **self.chain.to_json(R),
                'u': [list(e) for e in self.u_exponents],
                'j': [[R.format(c) for c in cs] for cs in self.j_cofactors]}


@dataclass(frozen=True)
class LineCertificate:
    'x_{i+1}^x_power * u_i = sum(j_cofactors * J_i) + x_cofactor * x_i.'
    x_power: int
    u_exponents: tuple
    j_cofactors: tuple
    x_cofactor: object


@dataclass(frozen=True)
class CollapseForm3:
    'x_1..x_l with the triangular memberships, one line per level.'
    chain: CollapseChain
    xs: tuple
    lines: tuple

    def line_holds(self, R: RingOracle, i: int) -> bool:
        line = self.lines[i]
        ell = self.chain.levels
        lhs = _monoid(R, self.chain.U[i], line.u_exponents)
        if i < ell:
            lhs = R.mul(R.power(self.xs[i], line.x_power), lhs)
        elif line.x_power:
            return False
        rhs = R.linear_combination(line.j_cofactors, self.chain.J[i])
        if i > 0:
            rhs = R.add(rhs, R.mul(line.x_cofactor, self.xs[i - 1]))
        return R.eq(lhs, rhs)

    def verify(self, R: RingOracle) -> bool:
        ell = self.chain.levels
        if len(self.xs) != ell or len(self.lines) != ell + 1:
            return False
        return all(self.line_holds(R, i) for i in range(ell + 1))

    def to_json(self, R: RingOracle) -> dict:
        return {'form': 3, **self.chain.to_json(R),
                'x': [R.format(x) for x in self.xs],
                'lines': [{'k': line.x_power, 'u': list(line.u_exponents),
                           'j': [R.format(c) for c in line.j_cofactors],
                           'd': R.format(line.x_cofactor)} for line in self.lines]}


def load_collapse(R: RingOracle, obj: dict):
    'Reads form-1 or form-3 collapse data.'
    try:
        chain = CollapseChain.from_json(R, obj)
        if obj.get('form') == 1:
            return CollapseForm1(chain, tuple(tuple(int(e) for e in u) for u in obj['u']),
                                 tuple(tuple(R.parse(c) for c in cs) for cs in obj['j']))
        if obj.get('form') == 3:
            lines = tuple(LineCertificate(int(line.get('k', 0)), tuple(line['u']),
                                          tuple(R.parse(c) for c in line['j']),
                                          R.parse(line.get('d', '0')))
                          for line in obj['lines'])
            return CollapseForm3(chain, tuple(R.parse(x) for x in obj['x']), lines)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f'Malformed collapse data: {e}') from e
    raise InvalidInputError('Collapse data needs "form": 1 or 3')


def collapse_1_to_3(R: RingOracle, data: CollapseForm1) -> CollapseForm3:
    'x_l = u_l + j_l and x_i = x_{i+1} u_i + j_i.'
    if not data.verify(R):
        raise CertificateError('Form-1 collapse data does not verify')
    chain, ell = data.chain, data.chain.levels

    xs = [None] * ell
    if ell:
        xs[ell - 1] = R.add(data.u(R, ell), data.j(R, ell))
        for i in range(ell - 1, 0, -1):
            xs[i - 1] = R.add(R.mul(xs[i], data.u(R, i)), data.j(R, i))

    lines = []
    for i in range(ell + 1):
        lines.append(LineCertificate(0 if i == ell else 1,
                                     data.u_exponents[i],
                                     tuple(R.neg(c) for c in data.j_cofactors[i]),
                                     R.zero if i == 0 else R.one))

    result = CollapseForm3(chain, tuple(xs), tuple(lines))
    if not result.verify(R):
        raise CertificateError('Triangular collapse data failed re-verification')
    return result


def _nested_value(R: RingOracle, chain: CollapseChain, level: int, us: list, js: list):
    v = R.one
    for k in reversed(range(len(us))):
        u = _monoid(R, chain.U[level + k], us[k])
        j = R.linear_combination(js[k], chain.J[level + k])
        v = R.add(R.mul(u, v), j)
    return v


def _nested_power(R: RingOracle, chain: CollapseChain, level: int, us: list, js: list, k: int):
    '''(u n + j)^k = u^k n^k + j * sum_{t=1..k} C(k, t) (u n)^(k-t) j^(t-1),
    applied level by level.'''
    u = _monoid(R, chain.U[level], us[0])
    j = R.linear_combination(js[0], chain.J[level])
    head = R.mul(u, _nested_value(R, chain, level + 1, us[1:], js[1:]))
    factor = R.total(R.mul(R.from_int(comb(k, t)), R.mul(R.power(head, k - t), R.power(j, t - 1)))
                     for t in range(1, k + 1))
    new_u = tuple(e * k for e in us[0])
    new_j = tuple(R.mul(c, factor) for c in js[0])
    if len(us) == 1:
        return [new_u], [new_j]
    inner_us, inner_js = _nested_power(R, chain, level + 1, us[1:], js[1:], k)
    return [new_u] + inner_us, [new_j] + inner_js


def collapse_3_to_1(R: RingOracle, data: CollapseForm3) -> CollapseForm1:
    '''Eliminates x_l, ..., x_1 from the bottom up: with Y_l = u_l - j_l = d_l x_l
    and Y_i = u_i Y_{i+1}^k - D^k j_i = (D^k d_i) x_i, Y_0 is a nested
    expression equal to zero.'''
    if not data.verify(R):
        raise CertificateError('Triangular collapse data does not verify')
    chain, ell, lines = data.chain, data.chain.levels, data.lines

    us = [lines[ell].u_exponents]
    js = [tuple(R.neg(c) for c in lines[ell].j_cofactors)]
    D = lines[ell].x_cofactor
    for i in range(ell - 1, -1, -1):
        line = lines[i]
        k = line.x_power
        powered_us, powered_js = _nested_power(R, chain, i + 1, us, js, k)
        Dk = R.power(D, k)
        us = [line.u_exponents] + powered_us
        js = [tuple(R.neg(R.mul(Dk, c)) for c in line.j_cofactors)] + powered_js
        D = R.mul(Dk, line.x_cofactor)

    result = CollapseForm1(chain, tuple(tuple(u) for u in us), tuple(tuple(j) for j in js))
    if not result.verify(R):
        raise CertificateError('Nested collapse identity failed re-verification')
    return result


def elementary_ring_chain(xs: Sequence) -> CollapseChain:
    '''Ring version of ((0, x_1), (x_1, x_2), ..., (x_l, 1)) with the vacuous
    0 and 1 dropped.'''
    xs = tuple(xs)
    return CollapseChain(((),) + tuple((x,) for x in xs), tuple((x,) for x in xs) + ((),))


def collapse_from_certificate(R: RingOracle, xs: Sequence, c: SingularityCertificate) -> CollapseForm1:
    '''Form-1 data on the elementary chain of xs: u_0 = x_1^m_1,
    u_i = x_{i+1}^m_{i+1}, u_l = 1, j_0 = 0 and j_i = a_i x_i.'''
    xs = tuple(xs)
    if not xs:
        raise InvalidInputError('Empty sequence')
    _checked(R, xs, c)
    ell = len(xs)
    us = tuple((c.m[i],) for i in range(ell)) + ((),)
    js = ((),) + tuple((c.a[i],) for i in range(ell))
    result = CollapseForm1(elementary_ring_chain(xs), us, js)
    if not result.verify(R):
        raise CertificateError('Collapse built from a certificate does not verify')
    return result
