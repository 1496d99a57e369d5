"""Flat ``key = value`` parameter files.

One parameter per line; ``#`` starts a comment; blank lines are ignored.
Values are parsed as floats, except that complex literals such as
``0.3+0.1j`` are accepted for keys that take a complex value (``m_sq``).
"""

from __future__ import annotations

import os
from typing import Dict, Iterable, Union

Value = Union[float, complex]

COMPLEX_KEYS = frozenset({"m_sq", "msq"})


class ConfigError(ValueError):
    """Malformed or inconsistent parameter input."""


def parse_config(lines: Iterable[str]) -> Dict[str, Value]:
    out: Dict[str, Value] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            out[key] = complex(value.replace(" ", "")) if key in COMPLEX_KEYS else float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse value {value!r} for {key!r}") from None
    return out


def load_config(path: Union[str, os.PathLike]) -> Dict[str, Value]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh)
