#!/usr/bin/env python3

"""Configuration loading, bit helpers and small shared utilities."""

import json
import logging
import os
import signal
from contextlib import contextmanager
from functools import lru_cache
from typing import Iterator, Optional

from omegaconf import DictConfig, OmegaConf


CONFIG_PATH = os.path.join(os.path.dirname(__file__), 'config', 'krullkit.yaml')
MAX_SEARCH_ENV = 'KRULLKIT_MAX_SEARCH'


@lru_cache(maxsize=None)
def _load_config(path: str) -> DictConfig:
    cfg = OmegaConf.load(path)

    if os.environ.get(MAX_SEARCH_ENV):
        cfg.krull.max_search = int(os.environ[MAX_SEARCH_ENV])

    OmegaConf.set_readonly(cfg, True)
    return cfg


def get_config(path: Optional[str] = None) -> DictConfig:
    'Returns the (read-only) library configuration.'
    return _load_config(path or CONFIG_PATH)


def reload_config():
    _load_config.cache_clear()


def setting(dotted_key: str, override=None):
    '''Returns `override` if given, otherwise the configured value at `dotted_key`
    (e.g. "groebner.max_basis").'''
    if override is not None:
        return override
    return OmegaConf.select(get_config(), dotted_key)


def setup_logging(level: str = 'WARNING'):
    logging.basicConfig(level=getattr(logging, level.upper()),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def bits(mask: int) -> Iterator[int]:
    'Yields the indices of the set bits of mask, lowest first.'
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count('1')


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@contextmanager
def time_limit(seconds: int):
    def signal_handler(signum, frame):
        raise TimeoutError("Timed out")
    signal.signal(signal.SIGALRM, signal_handler)
    signal.alarm(seconds)

    try:
        yield
    finally:
        signal.alarm(0)


def load_json(path: str):
    with open(path) as f:
        return json.load(f)


def save_json(obj, path: str):
    with open(path, 'w') as f:
        json.dump(obj, f, indent=2)
