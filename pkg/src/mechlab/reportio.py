"""Deterministic report rendering.

Reports are compared byte-for-byte across runs, so the JSON writer is
hand-rolled: keys keep insertion order and every float is rendered with
17 significant digits (enough to round-trip a double exactly).
"""

from __future__ import annotations

import json
import math


def render_number(x: float) -> str:
    if isinstance(x, bool):  # bool is an int subclass; keep JSON booleans
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot render non-finite number {x!r}")
    return format(x, ".17g")


def render_json(obj) -> str:
    """Serialize dict/list/str/number/None trees with stable bytes."""
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float)):
        return render_number(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            parts.append(f"{json.dumps(key)}: {render_json(value)}")
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot render {type(obj).__name__} to JSON")


def point_obj(pt) -> list[float]:
    return [float(c) for c in pt]


def profile_obj(profile) -> list[list[float]]:
    return [point_obj(pt) for pt in profile]
