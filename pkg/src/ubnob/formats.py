"""Deterministic JSON/CSV serialization.

Floats are written with 17 significant digits and mappings keep insertion
order, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .linalg import validate_density


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return "%.17g" % x


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1)) if indent else ""
    close = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + sep.join(items) + "\n" + close + "}" if indent else "{" + sep.join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # Leaf numeric rows stay on one line.
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, 0, 0) for v in seq) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in seq]
        return "[\n" + sep.join(items) + "\n" + close + "]" if indent else "[" + sep.join(items) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    return {"dim": int(m.shape[0]), "entries": [[z.real, z.imag] for z in m.ravel()]}


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        dim = int(data["dim"])
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs 'dim' and 'entries'") from exc
    if dim < 1 or len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries for dim {dim}, got {len(entries)}")
    vals = np.array([complex(float(re), float(im)) for re, im in entries])
    return vals.reshape(dim, dim)


def basis_to_json(vectors) -> list:
    return [[[z.real, z.imag] for z in v] for v in np.asarray(vectors, dtype=complex)]


def load_density(path) -> np.ndarray:
    """Read a density matrix from the matrix JSON format and validate it."""
    data = json.loads(Path(path).read_text())
    return validate_density(matrix_from_json(data))


def write_text(path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
