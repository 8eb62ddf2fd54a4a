#!/usr/bin/env python3

"""Command-line entry point.

    krullkit dim-lattice --lattice instances/chain-3.json
    krullkit kr-entails --lattice instances/boolean-4.json --query instances/boolean-4-atoms.json
    krullkit ring-singular --ring poly:zp5:1 --seq "x1, x1^2"
    krullkit ring-collapse --ring zz --chain instances/collapse-zz.json --to 3
    krullkit zar --ring zz --op join --a 6 --b 10
    krullkit entail --axioms instances/axioms-chain.json --query "a |- b"

Exit codes: 0 decided true, 1 decided false, 2 bounded-unknown, 3 invalid
input, 4 resource or capability limit, 5 certificate failure or
disagreement between methods.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Optional

from krullkit.certificates import (CollapseForm1, SearchBounds, algebraic_dependence,
                                   certificate_from_dependence, collapse_1_to_3,
                                   collapse_3_to_1, field_cert, integer_cert,
                                   load_collapse, search_certificate, verify_certificate)
from krullkit.entailment import EntailmentAxioms, closure_decide, free_lattice_enumerate
from krullkit.errors import (CapabilityError, CertificateError, InvalidInputError,
                             ResourceLimitError)
from krullkit.krull import (KrQuery, kr_entails, kr_entails_heyting, lattice_dim_leq,
                            lattice_dimension, spectral_dimension)
from krullkit.lattice import FiniteDistLattice, join_irreducibles, load_lattice
from krullkit.rings import IntegerRing, PolynomialRing, RingOracle, ring_from_flag
from krullkit.util import load_json, setup_logging
from krullkit.zariski import ZarElem, canonical, zar_eq, zar_implies_elem, zar_join, zar_leq, zar_meet

log = logging.getLogger(__name__)

HOLDS, FAILS, COLLAPSED, BOUNDED, ERROR = 'holds', 'fails', 'collapsed', 'bounded-unknown', 'error'

EXIT_TRUE, EXIT_FALSE, EXIT_BOUNDED = 0, 1, 2
EXIT_INVALID, EXIT_RESOURCE, EXIT_CERTIFICATE = 3, 4, 5


@dataclass
class CommandResult:
    status: str
    payload: dict = field(default_factory=dict)
    summary: str = ''
    exit_code: int = EXIT_TRUE
    details: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {'status': self.status, **self.payload}


def decided(value: bool, payload: dict, summary: str, status_true: str = HOLDS) -> CommandResult:
    return CommandResult(status_true if value else FAILS, payload, summary,
                         EXIT_TRUE if value else EXIT_FALSE)


def _read_lattice(path: str) -> FiniteDistLattice:
    return load_lattice(load_json(path))


def _parse_sequence(R: RingOracle, text: str) -> list:
    items = [s.strip() for s in text.split(',')]
    if items == ['']:
        return []
    if any(not s for s in items):
        raise InvalidInputError(f'Empty entry in sequence {text!r}')
    return [R.parse(s) for s in items]


def cmd_dim_lattice(args) -> CommandResult:
    L = _read_lattice(args.lattice)
    if args.leq is not None:
        report = lattice_dim_leq(L, args.leq, record_witnesses=args.verbose)
        payload = {'dimension_bound': args.leq, 'holds': report.holds,
                   'sequences_checked': report.sequences_checked}
        if report.counterexample is not None:
            payload['counterexample'] = [L.label(x) for x in report.counterexample]
        result = decided(report.holds, payload,
                         f'dimension {"<=" if report.holds else ">"} {args.leq}')
    else:
        d = lattice_dimension(L)
        payload = {'dimension': d, 'elements': len(L)}
        result = CommandResult(HOLDS, payload, f'dimension = {d}')
        if args.verbose:
            payload['spectral_dimension'] = spectral_dimension(L)
            report = lattice_dim_leq(L, d, generators=join_irreducibles(L), record_witnesses=True)

    if args.verbose and report.witnesses:
        table = [{'x': [L.label(x) for x in xs],
                  'a': None if ws is None else [L.label(a) for a in ws]}
                 for xs, ws in report.witnesses]
        result.payload['witnesses'] = table
        result.details = [f'{" ".join(row["x"])}  ->  {" ".join(row["a"]) if row["a"] else "none"}'
                          for row in table]
    return result


def cmd_kr_entails(args) -> CommandResult:
    L = _read_lattice(args.lattice)
    q = KrQuery.from_json(L, load_json(args.query))
    payload = {'levels': q.levels}

    witness = None
    if args.method in ('witness', 'both'):
        witness = kr_entails(L, q)
        payload['witness'] = None if witness is None else witness.to_json(L)
    if args.method in ('heyting', 'both'):
        payload['heyting'] = kr_entails_heyting(L, q)

    if args.method == 'both' and (witness is not None) != payload['heyting']:
        return CommandResult(ERROR, payload, 'witness search and Heyting evaluation disagree',
                             EXIT_CERTIFICATE)

    holds = witness is not None if args.method != 'heyting' else payload['heyting']
    summary = 'holds' if holds else 'fails'
    if witness is not None and witness.xs:
        summary += ' with witness ' + ', '.join(witness.to_json(L))
    return decided(holds, payload, summary)


def _singular(R: RingOracle, xs: list, method: str, bounds: SearchBounds):
    if method == 'auto':
        if isinstance(R, PolynomialRing) and 0 < len(xs) <= R.nvars + 1:
            method = 'dependence'
        elif R.is_field and len(xs) == 1:
            method = 'field'
        else:
            method = 'search'

    if method == 'dependence':
        if not isinstance(R, PolynomialRing):
            raise InvalidInputError('Dependence extraction needs a polynomial ring')
        Q = algebraic_dependence(R, xs)
        if Q is not None:
            return certificate_from_dependence(R, Q, xs), {'method': 'dependence', 'relation': str(Q.as_expr())}
        log.info('No algebraic dependence; falling back to bounded search')
        method = 'search'

    if method == 'field':
        return field_cert(R, xs), {'method': 'field'}
    if method == 'integer':
        if not isinstance(R, IntegerRing):
            raise InvalidInputError('The integer construction needs --ring zz')
        return integer_cert(xs, R), {'method': 'integer'}

    found = search_certificate(R, xs, bounds)
    return found.certificate, {'method': 'search', 'exponent_bound': found.exponent_bound,
                               'candidates': found.candidates}


def cmd_ring_singular(args) -> CommandResult:
    R = ring_from_flag(args.ring)
    xs = _parse_sequence(R, args.seq)
    bounds = SearchBounds.from_config(max_exponent=args.max_exponent,
                                      coefficient_bound=args.coefficient_bound,
                                      hard_cap=args.hard_cap, strategy=args.strategy)
    c, payload = _singular(R, xs, args.method, bounds)
    payload['ring'] = R.name
    payload['sequence'] = [R.format(x) for x in xs]

    if c is None:
        return CommandResult(BOUNDED, payload,
                             f'no certificate with exponents up to {payload["exponent_bound"]}',
                             EXIT_BOUNDED)
    if not verify_certificate(R, xs, c):
        raise CertificateError('Emitted certificate does not verify')
    payload['certificate'] = c.to_json(R)
    return CommandResult(HOLDS, payload, 'singular: ' + json.dumps(c.to_json(R)))


def cmd_ring_collapse(args) -> CommandResult:
    R = ring_from_flag(args.ring)
    data = load_collapse(R, load_json(args.chain))
    if not data.verify(R):
        raise CertificateError('Collapse data does not verify')

    source = 1 if isinstance(data, CollapseForm1) else 3
    if args.to == source:
        out = data
    elif args.to == 3:
        out = collapse_1_to_3(R, data)
    else:
        out = collapse_3_to_1(R, data)

    if not out.verify(R):
        raise CertificateError('Converted collapse data does not verify')
    return CommandResult(COLLAPSED, {'collapse': out.to_json(R)},
                         f'level-{out.chain.levels} chain collapses (form {args.to})')


def cmd_zar(args) -> CommandResult:
    R = ring_from_flag(args.ring)
    a = ZarElem(tuple(_parse_sequence(R, args.a)))
    b = ZarElem(tuple(_parse_sequence(R, args.b)))
    names = {'a': a.format(R), 'b': b.format(R)}

    if args.op in ('leq', 'eq'):
        value = zar_leq(R, a, b) if args.op == 'leq' else zar_eq(R, a, b)
        symbol = '<=' if args.op == 'leq' else '='
        return decided(value, {**names, 'op': args.op, 'holds': value},
                       f'{names["a"]} {symbol} {names["b"]}: {"holds" if value else "fails"}')

    if args.op == 'join':
        z = zar_join(a, b)
    elif args.op == 'meet':
        z = zar_meet(R, a, b)
    else:
        z = zar_implies_elem(R, a, b)
    z = canonical(R, z)
    payload = {**names, 'op': args.op, 'result': [R.format(g) for g in z.generators]}
    return CommandResult(HOLDS, payload, z.format(R))


def _parse_sequent(ax: EntailmentAxioms, text: str):
    if '|-' not in text:
        raise InvalidInputError(f'Sequent {text!r} needs a "|-"')
    lhs, rhs = text.split('|-', 1)

    def names(side: str) -> list:
        return [s.strip() for s in side.split(',') if s.strip()]

    return ax.sequent(names(lhs), names(rhs))


def cmd_entail(args) -> CommandResult:
    ax = EntailmentAxioms.from_json(load_json(args.axioms))
    payload = {'generators': list(ax.generators.names), 'axioms': len(ax.axioms)}
    result = None

    if args.enumerate:
        enumerated = free_lattice_enumerate(ax)
        payload['elements'] = len(enumerated.lattice)
        payload['labels'] = [enumerated.lattice.label(i) for i in range(len(enumerated.lattice))]
        result = CommandResult(HOLDS, payload, f'presented lattice has {len(enumerated.lattice)} elements')

    if args.query:
        q = _parse_sequent(ax, args.query)
        value = closure_decide(ax, q)
        payload['query'] = q.format(ax.generators)
        payload['holds'] = value
        result = decided(value, payload, f'{q.format(ax.generators)}: {"holds" if value else "fails"}')

    if result is None:
        raise InvalidInputError('entail needs --query or --enumerate')
    return result


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # Usage errors are invalid input, not bounded-unknown.
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='krullkit',
                     description='Krull dimension of distributive lattices and rings')
    parser.add_argument('--json', action='store_true', help='Print machine-readable JSON on stdout')
    parser.add_argument('--log-level', default='WARNING', help='Logging level (logs go to stderr)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('dim-lattice', help='Krull dimension of a finite distributive lattice')
    p.add_argument('--lattice', required=True, help='Lattice JSON file')
    p.add_argument('--leq', type=int, default=None, help='Only check dim <= LEQ')
    p.add_argument('--verbose', action='store_true', help='Print the per-sequence witness table')
    p.set_defaults(handler=cmd_dim_lattice)

    p = sub.add_parser('kr-entails', help='Decide a Kr_l query')
    p.add_argument('--lattice', required=True)
    p.add_argument('--query', required=True, help='Query JSON file')
    p.add_argument('--method', choices=('witness', 'heyting', 'both'), default='both')
    p.set_defaults(handler=cmd_kr_entails)

    p = sub.add_parser('ring-singular', help='Singularity certificate for a ring sequence')
    p.add_argument('--ring', required=True, help='zz | q | zmod:<n> | zp:<p> | poly:<field>:<nvars>')
    p.add_argument('--seq', required=True, help='Comma-separated ring elements')
    p.add_argument('--method', choices=('auto', 'dependence', 'search', 'field', 'integer'),
                   default='auto')
    p.add_argument('--max-exponent', type=int, default=None)
    p.add_argument('--coefficient-bound', type=int, default=None)
    p.add_argument('--hard-cap', type=int, default=None)
    p.add_argument('--strategy', choices=('membership', 'enumerate'), default=None)
    p.set_defaults(handler=cmd_ring_singular)

    p = sub.add_parser('ring-collapse', help='Verify and convert collapse data')
    p.add_argument('--ring', required=True)
    p.add_argument('--chain', required=True, help='Collapse JSON file (form 1 or 3)')
    p.add_argument('--to', type=int, choices=(1, 3), default=3)
    p.set_defaults(handler=cmd_ring_collapse)

    p = sub.add_parser('zar', help='Operations in the Zariski lattice')
    p.add_argument('--ring', required=True)
    p.add_argument('--op', required=True, choices=('leq', 'eq', 'join', 'meet', 'implies'))
    p.add_argument('--a', required=True, help='Generators of the first radical')
    p.add_argument('--b', required=True, help='Generators of the second radical')
    p.set_defaults(handler=cmd_zar)

    p = sub.add_parser('entail', help='Entailment relations given by axioms')
    p.add_argument('--axioms', required=True, help='Axiom JSON file')
    p.add_argument('--query', default=None, help='Sequent such as "a, b |- c"')
    p.add_argument('--enumerate', action='store_true', help='Enumerate the presented lattice')
    p.set_defaults(handler=cmd_entail)
    return parser


def run(args) -> CommandResult:
    try:
        return args.handler(args)
    except (InvalidInputError, FileNotFoundError, json.JSONDecodeError) as e:
        return CommandResult(ERROR, {'error': str(e)}, f'invalid input: {e}', EXIT_INVALID)
    except (ResourceLimitError, CapabilityError) as e:
        return CommandResult(ERROR, {'error': str(e)}, f'limit: {e}', EXIT_RESOURCE)
    except CertificateError as e:
        log.exception('Certificate failure')
        return CommandResult(ERROR, {'error': str(e)}, f'certificate failure: {e}', EXIT_CERTIFICATE)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    result = run(args)

    if args.json:
        print(json.dumps(result.to_json(), indent=2))
    else:
        print(result.summary)
        for line in result.details:
            print(line)
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
