"""Tree-structured values: the single currency of state, scripts, and the wire.

A value is one of: None, bool, float, str, list of values, or dict with
string keys. Numbers are always finite 64-bit floats; integers are folded
into floats on ingestion so equality and serialization stay exact and
platform-independent.
"""

from __future__ import annotations

import json
import math
from typing import Any

Value = Any  # None | bool | float | str | list[Value] | dict[str, Value]


class ValueError_(ValueError):
    """Raised when foreign data cannot be represented as a value."""


def ensure_value(obj: Any, where: str = "value") -> Value:
    """Normalize decoded JSON/YAML data into the value model.

    Ints become floats, non-finite numbers and non-string map keys are
    rejected, containers are rebuilt (never aliased to the input).
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, float)):
        num = float(obj)
        if not math.isfinite(num):
            raise ValueError_(f"{where}: non-finite number {obj!r}")
        return num
    if isinstance(obj, (list, tuple)):
        return [ensure_value(item, f"{where}[{i}]") for i, item in enumerate(obj)]
    if isinstance(obj, dict):
        out: dict[str, Value] = {}
        for key, item in obj.items():
            if not isinstance(key, str):
                raise ValueError_(f"{where}: map key {key!r} is not a string")
            out[key] = ensure_value(item, f"{where}.{key}")
        return out
    raise ValueError_(f"{where}: {type(obj).__name__} is not representable")


def deep_copy(value: Value) -> Value:
    if isinstance(value, list):
        return [deep_copy(v) for v in value]
    if isinstance(value, dict):
        return {k: deep_copy(v) for k, v in value.items()}
    return value


def deep_equal(a: Value, b: Value) -> bool:
    """Structural equality. Type-strict: true != 1.0, numbers compare exact."""
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, float) and isinstance(b, float):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(deep_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        if a.keys() != b.keys():
            return False
        return all(deep_equal(a[k], b[k]) for k in a)
    return False


def truthy(value: Value) -> bool:
    """Script-level truthiness: null, false, 0, "", [] and {} are falsy."""
    if value is None:
        return False
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value != 0.0
    return len(value) > 0


def _canon(value: Value) -> Any:
    if isinstance(value, float) and value == int(value) and abs(value) < 1e16:
        return int(value)
    if isinstance(value, list):
        return [_canon(v) for v in value]
    if isinstance(value, dict):
        return {k: _canon(v) for k, v in value.items()}
    return value


def canon_json(value: Value) -> str:
    """Canonical single-line JSON: sorted keys, compact separators, integral
    floats written as integers.

    Byte-stable for a given value, which makes event traces comparable
    across runs.
    """
    return json.dumps(_canon(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_wire(text: str, where: str = "payload") -> Value:
    try:
        decoded = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError_(f"{where}: invalid JSON ({err})") from err
    return ensure_value(decoded, where)


def number_repr(num: float) -> str:
    """Render a number the way scripts and specs write them: 5 not 5.0."""
    if num == int(num) and abs(num) < 1e16:
        return str(int(num))
    return repr(num)
