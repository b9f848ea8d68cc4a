"""JSON text formats for tensors and vectors.

Dense tensor: ``{"order": m, "dim": n, "entries": [... n**m reals, row-major ...]}``.
Sparse tensor: ``{"order": m, "dim": n, "coo": [[i1, ..., im, value], ...]}`` with
1-based indices; unlisted entries are zero. Vector: ``{"dim": n, "entries": [...]}``.
"""

import json
from pathlib import Path

import numpy as np

from .errors import DuplicateEntryError, FormatError
from .tensor_core import tensor_from_entries

__all__ = [
    "parse_tensor",
    "parse_vector",
    "load_tensor",
    "store_tensor",
    "load_vector",
    "store_vector",
    "tensor_to_dict",
]


def _loads(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _int_field(data, key, source, minimum):
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise FormatError(f"{source}: '{key}' must be an integer >= {minimum}, got {value!r}")
    return value


def _reals(values, source, what):
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{source}: {what} must be numbers") from exc
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise FormatError(f"{source}: {what} must be a flat list of finite numbers")
    return arr


def parse_tensor(text, source="<string>"):
    data = _loads(text, source)
    if not isinstance(data, dict):
        raise FormatError(f"{source}: expected a JSON object")
    m = _int_field(data, "order", source, 2)
    n = _int_field(data, "dim", source, 1)
    if ("entries" in data) == ("coo" in data):
        raise FormatError(f"{source}: exactly one of 'entries' or 'coo' is required")
    if "entries" in data:
        flat = _reals(data["entries"], source, "entries")
        if flat.size != n**m:
            raise FormatError(f"{source}: expected {n**m} entries for order {m}, dim {n}; got {flat.size}")
        return tensor_from_entries(m, n, flat)
    T = np.zeros((n,) * m)
    seen = set()
    if not isinstance(data["coo"], list):
        raise FormatError(f"{source}: 'coo' must be a list")
    for pos, item in enumerate(data["coo"]):
        if not isinstance(item, list) or len(item) != m + 1:
            raise FormatError(f"{source}: coo item {pos} must have {m} indices and a value")
        idx = item[:m]
        if not all(isinstance(i, int) and not isinstance(i, bool) and 1 <= i <= n for i in idx):
            raise FormatError(f"{source}: coo item {pos} has indices outside 1..{n}: {idx}")
        key = tuple(i - 1 for i in idx)
        if key in seen:
            raise DuplicateEntryError(f"{source}: duplicate coo index {tuple(idx)} (item {pos})")
        seen.add(key)
        value = _reals([item[m]], source, f"coo item {pos} value")[0]
        T[key] = value
    return T


def parse_vector(text, source="<string>"):
    data = _loads(text, source)
    if isinstance(data, list):
        return _reals(data, source, "vector")
    if not isinstance(data, dict):
        raise FormatError(f"{source}: expected a JSON object")
    n = _int_field(data, "dim", source, 1)
    v = _reals(data.get("entries"), source, "entries")
    if v.size != n:
        raise FormatError(f"{source}: expected {n} entries, got {v.size}")
    return v


def tensor_to_dict(T, sparse=False):
    T = np.asarray(T, dtype=float)
    m, n = T.ndim, T.shape[0]
    if not sparse:
        return {"order": m, "dim": n, "entries": T.ravel().tolist()}
    coo = [[int(i) + 1 for i in idx] + [float(T[idx])] for idx in zip(*np.nonzero(T))]
    return {"order": m, "dim": n, "coo": coo}


def load_tensor(path):
    path = Path(path)
    return parse_tensor(path.read_text(encoding="utf-8"), str(path))


def store_tensor(T, path, sparse=False):
    Path(path).write_text(json.dumps(tensor_to_dict(T, sparse)), encoding="utf-8")


def load_vector(path):
    path = Path(path)
    return parse_vector(path.read_text(encoding="utf-8"), str(path))


def store_vector(v, path):
    v = np.asarray(v, dtype=float).ravel()
    Path(path).write_text(json.dumps({"dim": int(v.size), "entries": v.tolist()}), encoding="utf-8")
