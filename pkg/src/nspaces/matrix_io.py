"""Matrix files: JSON ``{"n": int, "entries": [[...]]}`` or CSV with n rows of n floats."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .core import InvalidMatrixError


def _reject_nonfinite(token: str):
    raise InvalidMatrixError(f"non-finite value {token!r} in matrix file")


def matrix_from_json(text: str) -> np.ndarray:
    try:
        data = json.loads(text, parse_constant=_reject_nonfinite)
    except json.JSONDecodeError as exc:
        raise InvalidMatrixError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "entries" not in data:
        raise InvalidMatrixError('expected an object with "n" and "entries"')
    a = np.array(data["entries"], dtype=float)
    n = data.get("n", a.shape[0] if a.ndim else 0)
    if a.ndim != 2 or a.shape != (n, n):
        raise InvalidMatrixError(f'"entries" must be {n}x{n}, got shape {a.shape}')
    return a


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    try:
        a = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise InvalidMatrixError(f"invalid CSV matrix: {exc}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidMatrixError(f"CSV matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError("CSV matrix contains NaN or Inf")
    return a


def read_matrix(path: str | Path) -> np.ndarray:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text)
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return matrix_from_csv(text)


def matrix_to_json(a) -> str:
    a = np.asarray(a, dtype=float)
    if not all(math.isfinite(x) for x in a.ravel()):
        raise InvalidMatrixError("refusing to serialize non-finite entries")
    return json.dumps({"n": int(a.shape[0]), "entries": a.tolist()})


def matrix_to_csv(a) -> str:
    a = np.asarray(a, dtype=float)
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in a)
