#!/usr/bin/env python3

"""Commutative-ring oracles: exact arithmetic, equality, ideal and radical
membership with cofactors, and saturation where the ring supports it."""

import itertools
import logging
import math
from abc import ABC, abstractmethod
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence

import sympy as sp
from sympy.core.intfunc import igcdex
from sympy.parsing.sympy_parser import parse_expr

from krullkit import groebner
from krullkit.errors import CapabilityError, CertificateError, InvalidInputError
from krullkit.groebner import _PARSE_TRANSFORMATIONS

log = logging.getLogger(__name__)


class RingOracle(ABC):
    'A discrete commutative ring with a radical-membership oracle.'

    name: str = 'ring'
    is_field: bool = False

    @property
    @abstractmethod
    def zero(self):
        pass

    @property
    @abstractmethod
    def one(self):
        pass

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return a * b

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def is_zero(self, a) -> bool:
        return not a

    def power(self, a, k: int):
        result = self.one
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def product(self, xs: Iterable):
        return reduce(self.mul, xs, self.one)

    def total(self, xs: Iterable):
        return reduce(self.add, xs, self.zero)

    def linear_combination(self, cofactors: Sequence, gens: Sequence):
        if len(cofactors) != len(gens):
            raise InvalidInputError(f'{len(cofactors)} cofactors for {len(gens)} generators')
        return self.total(self.mul(c, g) for c, g in zip(cofactors, gens))

    def from_int(self, k: int):
        return self.mul(self.one, k)

    def from_ground(self, c):
        'Converts a coefficient of a dependence polynomial into the ring.'
        return self.from_int(int(c))

    def inverse(self, a):
        raise CapabilityError(f'{self.name} has no inverses')

    @abstractmethod
    def radical_membership(self, f, J: Sequence) -> bool:
        'f in the radical of <J>.'

    @abstractmethod
    def ideal_membership(self, f, J: Sequence) -> Optional[tuple]:
        'Cofactors c with f = sum(c[i] * J[i]), or None when f is not in <J>.'

    def ideal_saturation(self, J: Sequence, f) -> list:
        'Generators of (<J> : f^oo).'
        raise CapabilityError(f'{self.name} does not support saturation')

    def canonical_radical(self, J: Sequence) -> Optional[tuple]:
        'A canonical generator tuple for the radical of <J>, when the ring has one.'
        return None

    @abstractmethod
    def parse(self, text: str):
        pass

    def format(self, a) -> str:
        return str(a)

    @abstractmethod
    def elements(self, bound: int) -> Iterator:
        'Coefficient enumeration in the documented deterministic order.'

    def __repr__(self):
        return f'{type(self).__name__}({self.name})'


def _integer_order(bound: int) -> Iterator[int]:
    'Yields 0, 1, -1, 2, -2, ..., bound, -bound.'
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def _parse_integer(text: str) -> int:
    try:
        value = parse_expr(str(text), transformations=_PARSE_TRANSFORMATIONS)
    except (SyntaxError, TypeError, sp.SympifyError) as e:
        raise InvalidInputError(f'Cannot read {text!r} as an integer') from e
    if not getattr(value, 'is_Integer', False):
        raise InvalidInputError(f'{text!r} is not an integer')
    return int(value)


def _gcd_with_cofactors(values: Sequence[int]) -> tuple:
    'Returns (g, c) with g = gcd(values) >= 0 and g = sum(c[i] * values[i]).'
    g, cofactors = 0, []
    for v in values:
        x, y, g2 = igcdex(g, v)
        cofactors = [c * x for c in cofactors] + [y]
        g = g2
    if g < 0:
        g, cofactors = -g, [-c for c in cofactors]
    return g, cofactors


class IntegerRing(RingOracle):
    name = 'zz'

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, k: int):
        return int(k)

    def radical_membership(self, f, J) -> bool:
        g = math.gcd(*J) if J else 0
        if g == 0:
            return f == 0
        return all(f % p == 0 for p in sp.primefactors(g))

    def ideal_membership(self, f, J) -> Optional[tuple]:
        g, cofactors = _gcd_with_cofactors(list(J))
        if g == 0:
            return tuple(0 for _ in J) if f == 0 else None
        if f % g:
            return None
        q = f // g
        return tuple(c * q for c in cofactors)

    def ideal_saturation(self, J, f) -> list:
        g = math.gcd(*J) if J else 0
        if f == 0:
            return [1]
        if g == 0:
            return [0]
        # Strip the primes shared with f.
        h = math.gcd(g, f)
        while h > 1:
            g //= h
            h = math.gcd(g, f)
        return [g]

    def canonical_radical(self, J) -> tuple:
        g = math.gcd(*J) if J else 0
        if g == 0:
            return ()
        return (math.prod(sp.primefactors(g)),)

    def parse(self, text: str):
        return _parse_integer(text)

    def elements(self, bound: int) -> Iterator[int]:
        return _integer_order(bound)


class ModularRing(RingOracle):
    'Z/nZ with elements in range(n).'

    def __init__(self, n: int):
        if n < 2:
            raise InvalidInputError(f'Modulus must be at least 2, got {n}')
        self.n = n
        self.name = f'zmod:{n}'
        self.is_field = sp.isprime(n)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def power(self, a, k: int):
        return pow(a, k, self.n)

    def is_zero(self, a) -> bool:
        return a % self.n == 0

    def from_int(self, k: int):
        return int(k) % self.n

    def inverse(self, a):
        try:
            return sp.mod_inverse(a, self.n)
        except ValueError:
            raise InvalidInputError(f'{a} is not invertible mod {self.n}') from None

    def _ideal_gcd(self, J) -> int:
        return math.gcd(self.n, *J)

    def radical_membership(self, f, J) -> bool:
        return all(f % p == 0 for p in sp.primefactors(self._ideal_gcd(J)))

    def ideal_membership(self, f, J) -> Optional[tuple]:
        J = list(J)
        g, cofactors = _gcd_with_cofactors(J + [self.n])
        if f % g:
            return None
        q = f // g
        return tuple(c * q % self.n for c in cofactors[:-1])

    def ideal_saturation(self, J, f) -> list:
        g = self._ideal_gcd(J)
        h = math.gcd(g, f)
        while h > 1:
            g //= h
            h = math.gcd(g, f)
        return [g % self.n]

    def canonical_radical(self, J) -> tuple:
        return (math.prod(sp.primefactors(self._ideal_gcd(J))) % self.n,)

    def parse(self, text: str):
        return _parse_integer(text) % self.n

    def elements(self, bound: int) -> Iterator[int]:
        return iter(range(self.n))


class RationalField(RingOracle):
    name = 'q'
    is_field = True

    @property
    def zero(self):
        return sp.Rational(0)

    @property
    def one(self):
        return sp.Rational(1)

    def from_int(self, k: int):
        return sp.Rational(int(k))

    def from_ground(self, c):
        return sp.QQ.to_sympy(sp.QQ.convert(c))

    def inverse(self, a):
        if a == 0:
            raise InvalidInputError('0 has no inverse')
        return 1 / sp.Rational(a)

    def radical_membership(self, f, J) -> bool:
        return f == 0 or any(g != 0 for g in J)

    def ideal_membership(self, f, J) -> Optional[tuple]:
        J = list(J)
        if f == 0:
            return tuple(self.zero for _ in J)
        for i, g in enumerate(J):
            if g != 0:
                return tuple(f / g if k == i else self.zero for k in range(len(J)))
        return None

    def ideal_saturation(self, J, f) -> list:
        if f == 0 or any(g != 0 for g in J):
            return [self.one]
        return [self.zero]

    def canonical_radical(self, J) -> tuple:
        return (self.one,) if any(g != 0 for g in J) else ()

    def parse(self, text: str):
        try:
            value = parse_expr(str(text), transformations=_PARSE_TRANSFORMATIONS)
        except (SyntaxError, TypeError, sp.SympifyError) as e:
            raise InvalidInputError(f'Cannot read {text!r} as a rational') from e
        if not getattr(value, 'is_Rational', False):
            raise InvalidInputError(f'{text!r} is not a rational number')
        return sp.Rational(value)

    def elements(self, bound: int) -> Iterator:
        return (sp.Rational(k) for k in _integer_order(bound))


class PolynomialRing(RingOracle):
    'K[x1..xn] over QQ or GF(p), delegating ideal questions to the Groebner engine.'

    def __init__(self, field='q', nvars: int = 1):
        self.ring = groebner.polynomial_ring(nvars, field)
        self.domain = self.ring.domain
        self.nvars = nvars
        field_name = 'q' if self.domain == sp.QQ else f'zp:{self.domain.characteristic()}'
        self.name = f'poly:{field_name}:{nvars}'

    @property
    def zero(self):
        return self.ring.zero

    @property
    def one(self):
        return self.ring.one

    @property
    def gens(self) -> tuple:
        return self.ring.gens

    def from_int(self, k: int):
        return self.ring(int(k))

    def from_ground(self, c):
        return self.ring.ground_new(self.domain.convert(c))

    def _lift(self, f):
        return f if f.ring == self.ring else f.set_ring(self.ring)

    def radical_membership(self, f, J) -> bool:
        return groebner.radical_membership(self._lift(f), [self._lift(g) for g in J])

    def ideal_membership(self, f, J) -> Optional[tuple]:
        J = [self._lift(g) for g in J]
        if not J:
            return () if not f else None
        result = groebner.ideal_membership(self._lift(f), J)
        return result.cofactors if result.member else None

    def ideal_saturation(self, J, f) -> list:
        sat = groebner.saturation([self._lift(g) for g in J], self._lift(f))
        return list(sat.generators) or [self.zero]

    def parse(self, text: str):
        return groebner.parse_polynomial(text, self.ring)

    def format(self, a) -> str:
        return groebner.format_polynomial(a)

    def _coefficients(self, bound: int) -> list:
        if self.domain.is_FiniteField:
            return [self.domain(k) for k in range(self.domain.characteristic())]
        return [self.domain(k) for k in _integer_order(bound)]

    def monomials(self, degree: int) -> list:
        'Exponent vectors of total degree exactly `degree`, in lex order.'
        found = [m for m in itertools.product(range(degree + 1), repeat=self.nvars)
                 if sum(m) == degree]
        return sorted(found, reverse=True)

    def elements(self, bound: int) -> Iterator:
        '''Polynomials of total degree <= bound, by total degree then lex on the
        coefficient vectors. Coefficients follow the field enumeration.'''
        coefficients = self._coefficients(bound)
        lower = []
        for degree in range(bound + 1):
            top = self.monomials(degree)
            if degree == 0:
                for c in coefficients:
                    yield self.ring.ground_new(c)
                lower = top
                continue
            for head in itertools.product(coefficients, repeat=len(top)):
                if not any(head):
                    continue
                for tail in itertools.product(coefficients, repeat=len(lower)):
                    terms = {m: c for m, c in zip(top + lower, head + tail) if c}
                    yield self.ring.from_dict(terms)
            lower = top + lower


class UnivariatePolynomialRing(PolynomialRing):
    'K[x] with gcd-based radical membership and saturation.'

    def __init__(self, field='q'):
        super().__init__(field, 1)

    def _gcd(self, J):
        g = self.zero
        for h in J:
            g = g.gcd(self._lift(h))
        return g

    def radical_membership(self, f, J) -> bool:
        g = self._gcd(J)
        if not g:
            return not f
        return not self._lift(f).rem(g.sqf_part())

    def ideal_saturation(self, J, f) -> list:
        g, f = self._gcd(J), self._lift(f)
        if not f:
            return [self.one]
        if not g:
            return [self.zero]
        h = g.gcd(f)
        while not h.is_ground:
            g = g.exquo(h)
            h = g.gcd(f)
        return [g.monic()]

    def canonical_radical(self, J) -> tuple:
        g = self._gcd(J)
        if not g:
            return ()
        return (g.sqf_part().monic(),)


def integers() -> IntegerRing:
    return IntegerRing()


def modular(n: int) -> ModularRing:
    return ModularRing(n)


def rationals() -> RationalField:
    return RationalField()


def prime_field(p: int) -> ModularRing:
    if not sp.isprime(p):
        raise InvalidInputError(f'{p} is not prime')
    return ModularRing(p)


def univariate_poly(field='q') -> UnivariatePolynomialRing:
    return UnivariatePolynomialRing(field)


def multivariate_poly(field='q', nvars: int = 2) -> PolynomialRing:
    return PolynomialRing(field, nvars)


def ring_from_flag(flag: str) -> RingOracle:
    '''zz | q | zmod:<n> | zp:<p> | poly:<field>:<nvars> with field q, zp:<p>
    or zp<p>. One variable selects the gcd-based univariate oracle.'''
    parts = flag.strip().lower().split(':')
    try:
        if parts == ['zz']:
            return integers()
        if parts == ['q']:
            return rationals()
        if parts[0] == 'zmod' and len(parts) == 2:
            return modular(int(parts[1]))
        if parts[0] == 'zp' and len(parts) == 2:
            return prime_field(int(parts[1]))
        if parts[0] == 'poly' and len(parts) in (3, 4):
            field = ':'.join(parts[1:-1])
            nvars = int(parts[-1])
            if nvars == 1:
                return univariate_poly(field)
            return multivariate_poly(field, nvars)
    except ValueError as e:
        raise InvalidInputError(f'Bad ring flag {flag!r}: {e}') from e
    raise InvalidInputError(f'Unknown ring flag {flag!r}')


def verify_cofactors(R: RingOracle, f, J: Sequence, cofactors: Sequence):
    'Raises CertificateError unless f = sum(cofactors[i] * J[i]).'
    if not R.eq(f, R.linear_combination(cofactors, J)):
        raise CertificateError(f'Cofactors do not certify {R.format(f)} in the ideal')


def power_search(R: RingOracle, f, J: Sequence, max_power: int = 6) -> bool:
    'Bounded check: some f^k, k <= max_power, lies in <J>.'
    return any(R.ideal_membership(R.power(f, k), J) is not None
               for k in range(1, max_power + 1))
