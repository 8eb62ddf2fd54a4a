#!/usr/bin/env python3

"""Exception hierarchy shared by every krullkit module."""


class KrullkitError(Exception):
    'Base class for all errors raised by krullkit.'


class InvalidInputError(KrullkitError, ValueError):
    'Malformed input: bad JSON, unknown element names, arity mismatch, bad ring flag.'


class InvalidPosetError(InvalidInputError):
    'Cover relation with out-of-range indices, a cycle, or a non-reduced cover.'


class LatticeAxiomError(InvalidInputError):
    def __init__(self, law: str, triple: tuple, names=None):
        self.law = law
        self.triple = triple
        shown = tuple(names[i] for i in triple) if names is not None else triple
        super().__init__(f'{law} fails for {shown}')


class ResourceLimitError(KrullkitError, RuntimeError):
    'A configured search or size cap was exceeded.'


class CapabilityError(KrullkitError, NotImplementedError):
    'The ring oracle does not support the requested operation.'


class CertificateError(KrullkitError, ValueError):
    'A certificate (input or produced) failed re-verification.'
