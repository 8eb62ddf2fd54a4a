"""Constructive Krull dimension for finite distributive lattices and discrete rings."""

__version__ = '0.1.0'
