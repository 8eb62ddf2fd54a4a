#!/usr/bin/env python3

"""Exact polynomial arithmetic on sympy sparse rings: division with
cofactors, Buchberger's algorithm, ideal and radical membership,
saturation and elimination."""

import logging
import tokenize
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import sympy as sp
from sympy.parsing.sympy_parser import (convert_xor, parse_expr,
                                        standard_transformations)
from sympy.polys.domains import Domain
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, PolyRing

from krullkit.errors import CertificateError, InvalidInputError, ResourceLimitError
from krullkit.util import setting

log = logging.getLogger(__name__)

MAX_PRIME = 2 ** 31
ORDERS = ('grevlex', 'lex')

# Fresh indeterminate for the Rabinowitsch and saturation constructions.
_T = sp.Dummy('t')

_PARSE_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def field_domain(field) -> Domain:
    '''Resolves a field selector: "q" for the rationals, "zp:<p>", "zp<p>" or
    an int p for the prime field GF(p).'''
    if isinstance(field, Domain):
        return field
    if isinstance(field, int):
        p = field
    else:
        text = str(field).strip().lower()
        if text in ('q', 'qq'):
            return sp.QQ
        if not text.startswith('zp'):
            raise InvalidInputError(f'Unsupported field {field!r}')
        try:
            p = int(text[2:].lstrip(':'))
        except ValueError:
            raise InvalidInputError(f'Bad prime in field {field!r}') from None
    if not sp.isprime(p) or p >= MAX_PRIME:
        raise InvalidInputError(f'{p} is not a prime below 2^31')
    return sp.GF(p)


def polynomial_ring(nvars: int, field='q', order: str = 'grevlex',
                    names: Optional[Sequence[str]] = None) -> PolyRing:
    if nvars < 1:
        raise InvalidInputError(f'A polynomial ring needs at least one variable, got {nvars}')
    names = names or [f'x{i + 1}' for i in range(nvars)]
    return PolyRing(','.join(names), field_domain(field), order)


def total_degree(f: PolyElement) -> int:
    return max((sum(m) for m in f.keys()), default=0)


def transfer(f: PolyElement, target: PolyRing, positions: Sequence[Optional[int]]) -> PolyElement:
    '''Moves f into `target`, sending source variable i to target variable
    positions[i]. A None position requires the variable not to occur.'''
    terms = {}
    for monom, coeff in f.items():
        expv = [0] * target.ngens
        for i, e in enumerate(monom):
            if not e:
                continue
            if positions[i] is None:
                raise InvalidInputError(f'Variable {f.ring.symbols[i]} cannot be dropped from {f}')
            expv[positions[i]] = e
        terms[tuple(expv)] = coeff
    return target.from_dict(terms)


def parse_polynomial(text: str, ring: PolyRing) -> PolyElement:
    'Parses text like "3*x1^2*x2 - x3 + 1".'
    local = {str(s): s for s in ring.symbols}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_PARSE_TRANSFORMATIONS)
        return ring.from_expr(expr)
    except (SyntaxError, tokenize.TokenError, TypeError, ValueError, CoercionFailed, sp.SympifyError) as e:
        raise InvalidInputError(f'Cannot read {text!r} as a polynomial in '
                                f'{", ".join(map(str, ring.symbols))}: {e}') from e


def format_polynomial(f: PolyElement) -> str:
    return str(f.as_expr()).replace('**', '^')


@dataclass
class Division:
    'f = sum(quotients[i] * basis[i]) + remainder.'
    remainder: PolyElement
    quotients: tuple


@dataclass
class IdealBasis:
    '''Generators of an ideal, optionally with a Groebner basis in `order`
    and cofactor rows: basis[k] = sum(cofactors[k][i] * generators[i]).'''
    ring: PolyRing
    generators: tuple
    basis: Optional[tuple] = None
    order: Optional[str] = None
    cofactors: Optional[tuple] = None

    def contains_one(self) -> bool:
        if self.basis is None:
            raise ValueError('Groebner basis not computed')
        return any(g.is_ground for g in self.basis)

    def is_zero(self) -> bool:
        return not any(self.generators)


@dataclass
class Membership:
    member: bool
    cofactors: Optional[tuple] = None


def _on_ring(f: PolyElement, ring: PolyRing) -> PolyElement:
    return f if f.ring == ring else f.set_ring(ring)


def normal_form(f: PolyElement, basis: Sequence[PolyElement],
                order: Optional[str] = None) -> Division:
    '''Multivariate division of f by basis. No term of the remainder is
    divisible by a leading term of a nonzero basis element.'''
    basis = tuple(basis)
    if not basis:
        raise InvalidInputError('Division by an empty basis')

    ring = f.ring if order is None else f.ring.clone(order=order)
    f = _on_ring(f, ring)
    basis = tuple(_on_ring(g, ring) for g in basis)

    divisors = [(i, g) for i, g in enumerate(basis) if g]
    quotients = [ring.zero] * len(basis)
    if not f or not divisors:
        return Division(f, tuple(quotients))

    qs, r = f.div([g for _, g in divisors])
    for (i, _), q in zip(divisors, qs):
        quotients[i] = q
    return Division(r, tuple(quotients))


def spoly(f: PolyElement, g: PolyElement) -> PolyElement:
    'S-polynomial of monic f and g.'
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _update(R: PolyRing, lmG: list, P: set, lmf) -> set:
    'Adds the pairs for a new leading monomial, pruned by the Gebauer-Moeller criteria.'
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div
    n = len(lmG)

    P = {p for p in P if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}

    lcm_dict = {}
    for i in range(n):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)

    minimal_lcms = []
    for L in sorted(lcm_dict.keys(), key=R.order):
        if all(not div(L, L_) for L_ in minimal_lcms):
            minimal_lcms.append(L)

    for L in minimal_lcms:
        # Coprime criterion.
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            P.add((min(lcm_dict[L]), n))
    return P


def _reduce(f: PolyElement, row: Optional[list], G: list, rows: list):
    if not f or not G:
        return f, row
    qs, r = f.div(G)
    if row is not None:
        for q, g_row in zip(qs, rows):
            if q:
                row = [c - q * gc for c, gc in zip(row, g_row)]
    return r, row


def buchberger(gens: Iterable[PolyElement], order: str = 'grevlex',
               ring: Optional[PolyRing] = None, track_cofactors: bool = True,
               max_basis: Optional[int] = None, max_degree: Optional[int] = None,
               check: Optional[bool] = None) -> IdealBasis:
    'Reduced Groebner basis of the ideal generated by gens.'
    gens = tuple(gens)
    if ring is None:
        if not gens:
            raise InvalidInputError('Cannot infer the ring of an empty generator list')
        ring = gens[0].ring
    if order not in ORDERS:
        raise InvalidInputError(f'Unknown monomial order {order!r}')

    max_basis = setting('groebner.max_basis', max_basis)
    max_degree = setting('groebner.max_degree', max_degree)
    check = setting('groebner.check_bases', check)

    work = ring.clone(order=order)
    K = work.domain
    F = [_on_ring(g, work) for g in gens]
    n = len(F)

    G, rows, lmG = [], [], []
    P = set()

    def add(f, row):
        nonlocal P
        inverse = K.quo(K.one, f.LC)
        f = f.mul_ground(inverse)
        if row is not None:
            row = [c.mul_ground(inverse) for c in row]
        if len(G) >= max_basis:
            raise ResourceLimitError(f'Groebner basis grew past {max_basis} elements')
        if total_degree(f) > max_degree:
            raise ResourceLimitError(f'Groebner basis element of degree {total_degree(f)} '
                                     f'exceeds the cap {max_degree}')
        P = _update(work, lmG, P, f.LM)
        G.append(f)
        rows.append(row)
        lmG.append(f.LM)

    for i, f in enumerate(F):
        row = None
        if track_cofactors:
            row = [work.zero] * n
            row[i] = work.one
        f, row = _reduce(f, row, G, rows)
        if f:
            add(f, row)

    steps = 0
    while P:
        i, j = min(P, key=lambda p: (work.order(work.monomial_lcm(lmG[p[0]], lmG[p[1]])), p))
        P.remove((i, j))
        lcm = work.monomial_lcm(lmG[i], lmG[j])
        mi, mj = work.monomial_div(lcm, lmG[i]), work.monomial_div(lcm, lmG[j])
        s = G[i].mul_monom(mi) - G[j].mul_monom(mj)
        row = None
        if track_cofactors:
            row = [a.mul_monom(mi) - b.mul_monom(mj) for a, b in zip(rows[i], rows[j])]
        r, row = _reduce(s, row, G, rows)
        steps += 1
        if r:
            add(r, row)

    # Minimalize, then interreduce against the other minimal elements.
    kept = []
    for k in sorted(range(len(G)), key=lambda k: work.order(lmG[k])):
        if all(not work.monomial_div(lmG[k], lmG[m]) for m in kept):
            kept.append(k)

    basis, cofactors = [], []
    for k in kept:
        others = [m for m in kept if m != k]
        r, row = _reduce(G[k], rows[k], [G[m] for m in others], [rows[m] for m in others])
        inverse = K.quo(K.one, r.LC)
        basis.append(r.mul_ground(inverse))
        cofactors.append(tuple(c.mul_ground(inverse) for c in row) if row is not None else None)

    log.debug('Groebner basis (%s) of %d generators: %d elements after %d S-pairs',
              order, n, len(basis), steps)

    result = IdealBasis(work, tuple(F), tuple(basis), order,
                        tuple(cofactors) if track_cofactors else None)
    if check:
        if not is_groebner_basis(result.basis):
            raise CertificateError('Computed basis has an S-polynomial with nonzero remainder')
        if track_cofactors:
            for g, row in zip(result.basis, result.cofactors):
                if g != sum((c * f for c, f in zip(row, F)), work.zero):
                    raise CertificateError(f'Cofactors of basis element {g} do not verify')
    return result


def is_groebner_basis(basis: Sequence[PolyElement]) -> bool:
    'Every S-polynomial reduces to zero.'
    basis = [g for g in basis if g]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            f, g = basis[i].monic(), basis[j].monic()
            if spoly(f, g).rem(basis):
                return False
    return True


def _generators(I: Union[IdealBasis, Sequence[PolyElement]]) -> tuple:
    return tuple(I.generators) if isinstance(I, IdealBasis) else tuple(I)


def groebner(I: Union[IdealBasis, Sequence[PolyElement]], order: str = 'grevlex',
             ring: Optional[PolyRing] = None) -> IdealBasis:
    'I itself when it already carries a basis with cofactors in `order`, else a fresh one.'
    if isinstance(I, IdealBasis):
        if I.basis is not None and I.order == order and I.cofactors is not None:
            return I
        return buchberger(I.generators, order=order, ring=I.ring)
    return buchberger(I, order=order, ring=ring)


def ideal_membership(f: PolyElement, I: Union[IdealBasis, Sequence[PolyElement]],
                     order: str = 'grevlex') -> Membership:
    '''Decides f in I. Members come with cofactors c (in f's ring) such that
    f = sum(c[i] * generators[i]).'''
    R = f.ring
    gb = groebner(I, order, ring=R)
    work = gb.ring
    fw = _on_ring(f, work)
    n = len(gb.generators)

    if not gb.basis:
        if fw:
            return Membership(False)
        return Membership(True, tuple(R.zero for _ in range(n)))

    division = normal_form(fw, gb.basis)
    if division.remainder:
        return Membership(False)

    cofactors = [work.zero] * n
    for q, row in zip(division.quotients, gb.cofactors):
        if q:
            cofactors = [c + q * rc for c, rc in zip(cofactors, row)]

    if fw != sum((c * g for c, g in zip(cofactors, gb.generators)), work.zero):
        raise CertificateError(f'Membership cofactors for {f} do not verify')
    return Membership(True, tuple(_on_ring(c, R) for c in cofactors))


def _lift(R: PolyRing, order: str):
    S = PolyRing((_T,) + tuple(R.symbols), R.domain, order)
    up = list(range(1, R.ngens + 1))
    down = [None] + list(range(R.ngens))
    return S, up, down


def radical_membership(f: PolyElement, I: Union[IdealBasis, Sequence[PolyElement]]) -> bool:
    'f in the radical of I iff 1 in I + <1 - t*f>.'
    if not f:
        return True
    R = f.ring
    S, up, _ = _lift(R, 'grevlex')
    t = S.gens[0]
    lifted = [transfer(g, S, up) for g in _generators(I)]
    lifted.append(S.one - t * transfer(f, S, up))
    return buchberger(lifted, ring=S, track_cofactors=False).contains_one()


def saturation(I: Union[IdealBasis, Sequence[PolyElement]], f: PolyElement) -> IdealBasis:
    '(I : f^oo), as (I + <1 - t*f>) intersected with the base ring.'
    R = f.ring
    gens = tuple(g for g in _generators(I) if g)
    if not f:
        return IdealBasis(R, (R.one,))
    if f.is_ground:
        return IdealBasis(R, tuple(_on_ring(g, R) for g in gens))

    S, up, down = _lift(R, 'lex')
    t = S.gens[0]
    lifted = [transfer(g, S, up) for g in gens] + [S.one - t * transfer(f, S, up)]
    gb = buchberger(lifted, order='lex', ring=S, track_cofactors=False)
    kept = tuple(transfer(g, R, down) for g in gb.basis if all(m[0] == 0 for m in g.keys()))
    return IdealBasis(R, kept)


def eliminate(I: Union[IdealBasis, Sequence[PolyElement]], variables: Iterable,
              ring: Optional[PolyRing] = None, max_degree: Optional[int] = None) -> IdealBasis:
    '''Generators of I intersected with the subring in the remaining variables.
    Variables are given by index, symbol or generator.'''
    gens = _generators(I)
    if ring is None and not isinstance(I, IdealBasis) and not gens:
        raise InvalidInputError('eliminate needs at least one generator or an explicit ring')
    R = ring or (I.ring if isinstance(I, IdealBasis) else gens[0].ring)

    eliminated = []
    for v in variables:
        if isinstance(v, int):
            eliminated.append(v)
        elif isinstance(v, PolyElement):
            eliminated.append(R.gens.index(_on_ring(v, R)))
        else:
            eliminated.append(R.symbols.index(v))
    eliminated = sorted(set(eliminated))
    if not eliminated:
        return IdealBasis(R, tuple(_on_ring(g, R) for g in gens))

    remaining = [i for i in range(R.ngens) if i not in eliminated]
    symbols = [R.symbols[i] for i in eliminated + remaining]
    S = PolyRing(symbols, R.domain, 'lex')
    up = [None] * R.ngens
    for k, i in enumerate(eliminated + remaining):
        up[i] = k
    down = [None] * len(eliminated) + remaining

    gb = buchberger([transfer(g, S, up) for g in gens], order='lex', ring=S,
                    track_cofactors=False, max_degree=max_degree)
    k = len(eliminated)
    kept = tuple(transfer(g, R, down) for g in gb.basis
                 if all(not any(m[:k]) for m in g.keys()))
    log.debug('Eliminated %d variables: %d generators remain', k, len(kept))
    return IdealBasis(R, kept)
