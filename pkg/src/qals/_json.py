"""Canonical JSON: sorted keys, reals always printed with 17 significant digits."""

from __future__ import annotations

import json
import math
from numbers import Integral, Real


def format_real(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialise non-finite value {value!r}")
    if value == 0.0:
        value = 0.0  # drop the sign of -0.0
    return format(value, ".17g")


def dumps_canonical(obj, indent: int | None = 1, _level: int = 0) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = "," if indent is None else ","

    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, Integral):
        return str(int(obj))
    if isinstance(obj, Real):
        return format_real(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        body = sep.join(
            pad + json.dumps(str(k)) + ": " + dumps_canonical(v, indent, _level + 1)
            for k, v in items)
        return "{" + body + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # numeric leaf rows stay on one line
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps_canonical(v, None) for v in obj) + "]"
        body = sep.join(pad + dumps_canonical(v, indent, _level + 1) for v in obj)
        return "[" + body + end + "]"
    if hasattr(obj, "tolist"):
        return dumps_canonical(obj.tolist(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
