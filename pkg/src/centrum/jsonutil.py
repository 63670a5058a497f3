"""Deterministic JSON emission.

The stdlib json module formats floats with repr, which is already
round-trip safe, but we want byte-identical output across runs and
platforms for diffable reports, so every float goes through one
formatting routine (17 significant digits). Only the types our own
data structures produce are supported.
"""

import json
import math

import numpy as np


def format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    if value == int(value) and abs(value) < 1e16:
        # keep 2.0 as 2.0, not 2
        return "%.1f" % value
    return format(value, ".17g")


def _emit(obj, indent: int, level: int, pieces: list) -> None:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(format_float(float(obj)))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError("JSON object keys must be strings, got %r" % (key,))
            pieces.append(inner + json.dumps(key) + ": ")
            _emit(val, indent, level + 1, pieces)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else list(obj)
        if not seq:
            pieces.append("[]")
            return
        # short numeric rows stay on one line so matrices read naturally
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            parts = []
            for v in seq:
                sub: list = []
                _emit(v, indent, 0, sub)
                parts.append("".join(sub))
            pieces.append("[" + ", ".join(parts) + "]")
            return
        pieces.append("[\n")
        for i, val in enumerate(seq):
            pieces.append(inner)
            _emit(val, indent, level + 1, pieces)
            pieces.append(",\n" if i < len(seq) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        raise TypeError("cannot serialize %r" % type(obj))


def dumps(obj, indent: int = 2) -> str:
    pieces: list = []
    _emit(obj, indent, 0, pieces)
    return "".join(pieces)


def dump_path(obj, path, indent: int = 2) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, indent=indent))
        fh.write("\n")
