"""Reading and writing boxes in the ``tribox-v1`` JSON format.

    {"format": "tribox-v1", "probs": [64 reals], "correlators": {"A0": ..., ...}}

``probs`` uses the flat order ``i*32 + j*16 + k*8 + m*4 + n*2 + o``;
``correlators`` is optional on input and, when present alone, is enough to
rebuild the box.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np

from .box import TOL_QUANTUM, Behavior, from_correlators

FORMAT = "tribox-v1"


def _num(x: float) -> float:
    return float(x) + 0.0  # folds -0.0 into 0.0


def box_to_dict(b: Behavior, correlators: bool = True) -> dict[str, Any]:
    out: dict[str, Any] = {"format": FORMAT, "probs": [_num(v) for v in b.flat]}
    if correlators:
        out["correlators"] = {k: _num(v) for k, v in b.correlators.as_dict().items()}
    return out


def box_from_dict(data: dict[str, Any], tol: float = TOL_QUANTUM) -> Behavior:
    if data.get("format") != FORMAT:
        raise ValueError(f"expected format {FORMAT!r}, got {data.get('format')!r}")
    if "probs" in data:
        probs = np.asarray(data["probs"], dtype=float)
        if probs.shape != (64,):
            raise ValueError(f"'probs' must hold 64 numbers, got shape {probs.shape}")
        b = Behavior(probs, tol=tol)
        if "correlators" in data:
            given = data["correlators"]
            mine = b.correlators.as_dict()
            for key, val in given.items():
                if key not in mine:
                    raise ValueError(f"unknown correlator key {key!r}")
                if not math.isclose(mine[key], float(val), abs_tol=1e-9):
                    raise ValueError(f"correlator {key} = {val} disagrees with probs ({mine[key]})")
        return b
    if "correlators" in data:
        return from_correlators(data["correlators"], tol=tol)
    raise ValueError("box needs 'probs' or 'correlators'")


def _encode(obj: Any, indent: int) -> str:
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot encode {obj} in JSON")
        return f"{float(obj) + 0.0:.17g}"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, 0) for v in obj) + "]"
        items = [inner + _encode(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, 0) + "\n"


def write_box(b: Behavior, path: Union[str, Path], correlators: bool = True) -> None:
    Path(path).write_text(dumps(box_to_dict(b, correlators)))


def read_box(path: Union[str, Path], tol: float = TOL_QUANTUM) -> Behavior:
    return box_from_dict(json.loads(Path(path).read_text()), tol)
