"""JSON / TSV interchange.

Labels are always strings (``"3"``, ``"-1/2"``) so that they round-trip
exactly; edges are ``"u-v"`` with ``u < v``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .complex import Edge, parse_edge
from .errors import FileFormatError
from .motion import MotionPlan


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def parse_label(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise FileFormatError(f"label {text!r} is not an integer or a 'p/q' string")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(f"bad label {text!r}") from exc


def parse_label_list(items) -> tuple[Fraction, ...]:
    return tuple(parse_label(x) for x in items)


def parse_edge_list(items) -> tuple[Edge, ...]:
    try:
        return tuple(parse_edge(s) for s in items)
    except (ValueError, AttributeError) as exc:
        raise FileFormatError(f"bad edge name in {items!r}") from exc


def load_points(path) -> np.ndarray:
    """``[[x, y, z], ...]``; points are normalised onto the unit sphere."""
    data = read_json(path)
    try:
        P = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{path}: expected a list of [x, y, z] triples") from exc
    if P.ndim != 2 or P.shape[1] != 3:
        raise FileFormatError(f"{path}: expected a list of [x, y, z] triples")
    norms = np.linalg.norm(P, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise FileFormatError(f"{path}: zero or non-finite point")
    return P / norms[:, None]


def load_plan(path) -> MotionPlan:
    data = read_json(path)
    try:
        return MotionPlan.from_json(data)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FileFormatError(f"{path}: bad motion plan: {exc}") from exc


def labels_to_json(labels) -> dict:
    return {f"{u}-{v}": str(x) for (u, v), x in sorted(labels.items())}


def load_labels(path) -> dict:
    """Mapping ``"u-v" -> label``."""
    data = read_json(path)
    if not isinstance(data, dict):
        raise FileFormatError(f"{path}: expected an object mapping 'u-v' to labels")
    out = {}
    for k, v in data.items():
        (e,) = parse_edge_list([k])
        out[e] = parse_label(v)
    return out


def tsv(rows) -> str:
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)
