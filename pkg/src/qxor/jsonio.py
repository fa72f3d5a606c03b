"""Helpers for the JSON wire encoding of complex data.

Complex scalars are encoded as two-element ``[re, im]`` arrays; vectors are
lists of pairs and matrices are row-major lists of rows of pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError


def complex_to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(p, where: str = "value") -> complex:
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise ParseError(f"{where}: expected a [re, im] pair, got {p!r}")
    re, im = p
    if isinstance(re, bool) or isinstance(im, bool) or not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ParseError(f"{where}: [re, im] entries must be numbers, got {p!r}")
    return complex(re, im)


def vector_to_pairs(v: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v, dtype=complex)]


def pairs_to_vector(data, where: str = "vector") -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError(f"{where}: expected a non-empty list of [re, im] pairs")
    return np.array([pair_to_complex(p, where) for p in data], dtype=complex)


def matrix_to_pairs(A: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(A, dtype=complex)]


def pairs_to_matrix(data, where: str = "matrix") -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{where}: expected a list of rows of [re, im] pairs")
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise ParseError(f"{where}: rows have inconsistent lengths")
    return np.array(
        [[pair_to_complex(p, where) for p in row] for row in data], dtype=complex
    )


def load_json(path) -> dict:
    """Read a JSON object from ``path``, reporting line context on failure."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return data


def dump_json(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def require_key(d: dict, key: str, where: str):
    if key not in d:
        raise ParseError(f"{where}: missing required key {key!r}")
    return d[key]
