"""JSON algebra files and report serialization.

File layout::

    {"dim": n, "mode": "rational" | "float", "labels": [...],
     "constants": [[i, j, k, "p/q" | number], ...],
     "metric": [[...], ...], "meta": {...}}

Rationals are written as ``"p/q"`` strings and floats with Python's shortest
round-trip repr, so ``load(save(M))`` reproduces ``M`` bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .core import Algebra, AlgebraError, BilinearForm, MetrizedAlgebra
from .numeric import MODES, RATIONAL, QArray, format_rational, parse_rational

SCHEMA_KEYS = ("dim", "mode", "labels", "constants", "metric", "meta")


class FormatError(ValueError):
    """Schema violation; ``path`` names the offending field (e.g. ``constants[3][2]``)."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def jsonable(obj: Any) -> Any:
    """Convert Fractions, numpy values, forms, and tuple-keyed dicts to plain JSON data."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, QArray):
        return jsonable(obj.to_fractions())
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()] if obj.dtype != object else [jsonable(v) for v in obj]
    if isinstance(obj, BilinearForm):
        return jsonable(obj.entries())
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)): jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return repr(obj)


def _scalar_out(v, mode: str):
    return format_rational(v) if mode == RATIONAL else float(v)


def to_document(M: MetrizedAlgebra | Algebra, form: BilinearForm | None = None) -> dict:
    if isinstance(M, MetrizedAlgebra):
        alg, form, meta = M.algebra, M.form, M.meta
    else:
        alg, meta = M, {}
    doc: dict[str, Any] = {"dim": alg.dim, "mode": alg.mode}
    if alg.labels is not None:
        doc["labels"] = list(alg.labels)
    doc["constants"] = [[i, j, k, _scalar_out(v, alg.mode)] for i, j, k, v in alg.constants]
    if form is not None:
        doc["metric"] = [[_scalar_out(v, alg.mode) for v in row] for row in form.entries()]
    if meta:
        doc["meta"] = jsonable(meta)
    return doc


def dumps(M, form=None) -> str:
    return json.dumps(to_document(M, form), indent=1)


def save(path, M, form=None) -> None:
    Path(path).write_text(dumps(M, form) + "\n")


def _index(value, path: str, dim: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(path, f"index must be an integer, got {value!r}")
    if not 0 <= value < dim:
        raise FormatError(path, f"index {value} out of range [0, {dim})")
    return value


def _scalar_in(value, path: str, mode: str):
    if mode == RATIONAL:
        if isinstance(value, float):
            raise FormatError(path, f"float {value!r} in a rational-mode file; write it as \"p/q\"")
        try:
            return parse_rational(value)
        except (TypeError, ValueError) as exc:
            raise FormatError(path, str(exc)) from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(path, f"expected a number, got {value!r}")
    return float(value)


def from_document(doc: Any) -> tuple[Algebra, BilinearForm | None, dict]:
    if not isinstance(doc, dict):
        raise FormatError("$", "top level must be an object")
    extra = set(doc) - set(SCHEMA_KEYS)
    if extra:
        raise FormatError(sorted(extra)[0], "unknown field")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise FormatError("dim", f"must be a positive integer, got {dim!r}")
    mode = doc.get("mode", RATIONAL)
    if mode not in MODES:
        raise FormatError("mode", f"must be one of {MODES}, got {mode!r}")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
        raise FormatError("labels", f"must be a list of {dim} strings")
    raw = doc.get("constants", [])
    if not isinstance(raw, list):
        raise FormatError("constants", "must be a list")
    consts, seen = [], set()
    for r, entry in enumerate(raw):
        p = f"constants[{r}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise FormatError(p, "must be [i, j, k, value]")
        i, j, k = (_index(entry[c], f"{p}[{c}]", dim) for c in range(3))
        if (i, j, k) in seen:
            raise FormatError(p, f"duplicate entry for ({i}, {j}, {k})")
        seen.add((i, j, k))
        consts.append((i, j, k, _scalar_in(entry[3], f"{p}[3]", mode)))
    try:
        alg = Algebra(dim, consts, mode, labels)
    except AlgebraError as exc:
        raise FormatError("constants", str(exc)) from None
    form = None
    if "metric" in doc:
        rows = doc["metric"]
        if not isinstance(rows, list) or len(rows) != dim:
            raise FormatError("metric", f"must be a {dim} x {dim} list of rows")
        entries = []
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dim:
                raise FormatError(f"metric[{r}]", f"row must have {dim} entries")
            entries.append([_scalar_in(v, f"metric[{r}][{c}]", mode) for c, v in enumerate(row)])
        try:
            arr = np.array(entries, dtype=object if mode == RATIONAL else float)
            form = BilinearForm(arr, mode)
        except AlgebraError as exc:
            raise FormatError("metric", str(exc)) from None
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise FormatError("meta", "must be an object")
    return alg, form, meta


def loads(text: str) -> tuple[Algebra, BilinearForm | None, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_document(doc)


def load(path) -> tuple[Algebra, BilinearForm | None, dict]:
    return loads(Path(path).read_text())


def load_metrized(path, strict: bool = False) -> MetrizedAlgebra:
    alg, form, meta = load(path)
    if form is None:
        raise FormatError("metric", "missing; a metrized algebra needs a metric")
    M = MetrizedAlgebra(alg, form, meta, strict=strict)
    M.meta.setdefault("name", Path(path).name)
    return M


def report_json(report: dict) -> str:
    """Canonical report text: sorted keys, so identical inputs give identical bytes."""
    return json.dumps(jsonable(report), indent=1, sort_keys=True)


def report_csv(report: dict) -> str:
    """Flatten a report to ``key,value`` lines with dotted key paths."""
    rows: list[tuple[str, Any]] = []

    def walk(prefix: str, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            rows.append((prefix, obj))

    walk("", jsonable(report))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in rows:
        w.writerow([k, json.dumps(v) if isinstance(v, list) else v])
    return buf.getvalue()
