"""Canonical JSON serialization: sorted keys, 17-significant-digit floats.

Reports are compared byte-for-byte in golden tests, so this module renders
JSON itself instead of relying on library float formatting.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np


def to_jsonable(obj):
    """Normalize report objects into plain JSON-ready structures."""
    if hasattr(obj, "to_json_dict"):
        return to_jsonable(obj.to_json_dict())
    if isinstance(obj, dict):
        out = {}
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out[key] = to_jsonable(value)
        return out
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, type(None), str, int)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def _render_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    text = format(x, ".17g")
    return text


def _render(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _render_float(value)
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [_render(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(pad + s for s in items) + "\n" + closing_pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = []
        for key in sorted(value):
            rendered = _render(value[key], indent, level + 1)
            parts.append(pad + json.dumps(key, ensure_ascii=True) + ": " + rendered)
        return "{\n" + ",\n".join(parts) + "\n" + closing_pad + "}"
    raise TypeError(f"cannot render {type(value).__name__}")


def canonical_dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text for a report object."""
    return _render(to_jsonable(obj), indent, 0) + "\n"


def dump_path(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj), encoding="utf-8")


def load_path(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
