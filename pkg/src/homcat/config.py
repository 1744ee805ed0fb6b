"""Resource budgets and runtime settings.

Keys: ``max_tuples`` (largest bar-complex basis built, default 300000),
``max_entry_bits`` (coefficient growth cap in exact elimination, default
256), ``cocycle_budget`` (normalized 2-cochains enumerated, default 2**26),
``zigzag_bound`` (congruence search, default 2) and ``threads``.

``threads`` is read from ``HOMCAT_THREADS``; all computations here run on a
single thread, so it only caps, and results never depend on it.
"""

from __future__ import annotations

import json
import os
from contextlib import contextmanager

DEFAULTS = {
    "max_tuples": 300_000,
    "max_entry_bits": 256,
    "cocycle_budget": 2 ** 26,
    "zigzag_bound": 2,
    "threads": 1,
}

CONFIG = dict(DEFAULTS)


def _env_threads():
    raw = os.environ.get("HOMCAT_THREADS")
    if raw is None:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def get(key):
    return CONFIG[key]


def configure(**kw):
    for k, v in kw.items():
        if k not in DEFAULTS:
            raise KeyError(f"unknown configuration key {k!r}")
        CONFIG[k] = type(DEFAULTS[k])(v)


@contextmanager
def override(**kw):
    """Temporarily change settings."""
    saved = dict(CONFIG)
    configure(**kw)
    try:
        yield
    finally:
        CONFIG.clear()
        CONFIG.update(saved)


def reset():
    CONFIG.clear()
    CONFIG.update(DEFAULTS)
    t = _env_threads()
    if t is not None:
        CONFIG["threads"] = t


def load(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("configuration file must hold a JSON object")
    configure(**data)


reset()
