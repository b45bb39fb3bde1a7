"""Canonical JSON: sorted keys, floats at 17 significant digits, Fractions as strings.

Two calls on equal data return identical text, which is what golden files and
the determinism check rely on.
"""

from __future__ import annotations

import enum
import json
import math
from fractions import Fraction

import numpy as np

from repspace.poly import RationalPolynomial


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    if x == 0:
        # fold -0.0 into 0.0
        return "0.0"
    text = format(x, ".17g")
    if all(c not in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, indent: int | None, level: int) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, enum.Enum):
        return _encode(obj.value, indent, level)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, RationalPolynomial):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        parts = [f"{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in items]
        return _wrap("{", "}", parts, indent, level)
    if isinstance(obj, (list, tuple)):
        return _wrap("[", "]", [_encode(v, indent, level + 1) for v in obj], indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _wrap(open_: str, close: str, parts: list[str], indent: int | None, level: int) -> str:
    if not parts:
        return open_ + close
    if indent is None:
        return open_ + ", ".join(parts) + close
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    return open_ + "\n" + ",\n".join(pad + p for p in parts) + "\n" + end + close


def canonical_json(obj, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0) + "\n"
