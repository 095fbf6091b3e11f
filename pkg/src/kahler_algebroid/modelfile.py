"""JSON model files and canonical report serialization.

Model file layout (indices 1-based, scalars as "p/q" strings or integers)::

    {"name": "kt", "rank": 4,
     "structure": [{"i": 1, "j": 2, "k": 3, "c": "-1"}],
     "anchor": {"target_dim": 0, "matrix": []},
     "metric": [[...], ...],  "J": [[...], ...],
     "omega": [{"i": 1, "j": 3, "c": "1"}],
     "eta": "1"}

``J`` is given by rows; column b holds the coordinates of J e_b.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from fractions import Fraction
from typing import Any

from .constructions import BManifoldSpec
from .errors import ModelError, ParseError
from .exact_linalg import Matrix
from .exterior import FormVector
from .model import AlgebroidPresentation, Verdict
from .scalars import GaussianRational, format_scalar, is_real, parse_scalar

SCHEMA_VERSION = 1
_MODEL_KEYS = {"name", "rank", "structure", "anchor", "metric", "J", "omega", "eta"}


def _scalar(obj, path: str) -> Fraction:
    try:
        x = parse_scalar(obj)
    except ValueError as exc:
        raise ParseError(str(exc), path) from None
    if not is_real(x):
        raise ParseError("model data must be real", path)
    return x if type(x) is not GaussianRational else x.re


def _int(obj, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ParseError(f"expected an integer, got {obj!r}", path)
    if lo is not None and obj < lo or hi is not None and obj > hi:
        raise ParseError(f"value {obj} outside {lo}..{hi}", path)
    return obj


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise ParseError(f"expected a list, got {type(obj).__name__}", path)
    return obj


def _dict(obj, path: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object, got {type(obj).__name__}", path)
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ParseError(f"unknown key {extra[0]!r}", path)
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"missing key {missing[0]!r}", path)
    return obj


def _matrix(obj, path: str, nrows: int, ncols: int) -> Matrix:
    rows = _list(obj, path)
    if len(rows) != nrows:
        raise ParseError(f"expected {nrows} rows, got {len(rows)}", path)
    out = []
    for a, row in enumerate(rows):
        row = _list(row, f"{path}[{a}]")
        if len(row) != ncols:
            raise ParseError(f"expected {ncols} entries, got {len(row)}", f"{path}[{a}]")
        out.append([_scalar(x, f"{path}[{a}][{b}]") for b, x in enumerate(row)])
    return Matrix(out, ncols)


def model_from_dict(doc: Any) -> AlgebroidPresentation:
    doc = _dict(doc, "$", _MODEL_KEYS, {"rank"})
    r = _int(doc["rank"], "$.rank", 0, 12)
    struct: dict[tuple[int, int, int], Fraction] = {}
    for n, e in enumerate(_list(doc.get("structure", []), "$.structure")):
        path = f"$.structure[{n}]"
        e = _dict(e, path, {"i", "j", "k", "c"}, {"i", "j", "k", "c"})
        i, j, k = (_int(e[x], f"{path}.{x}", 1, r) for x in "ijk")
        if i >= j:
            raise ParseError("structure entries need i < j", f"{path}.j")
        key = (i - 1, j - 1, k - 1)
        if key in struct:
            raise ParseError("duplicate structure entry", path)
        struct[key] = _scalar(e["c"], f"{path}.c")
    anchor = None
    if "anchor" in doc:
        a = _dict(doc["anchor"], "$.anchor", {"target_dim", "matrix"}, {"target_dim"})
        n = _int(a["target_dim"], "$.anchor.target_dim", 0)
        rows = a.get("matrix")
        if rows is None or (n == 0 and rows == []):
            rows = [[0] * n for _ in range(r)]
        anchor = _matrix(rows, "$.anchor.matrix", r, n)
    metric = _matrix(doc["metric"], "$.metric", r, r) if doc.get("metric") is not None else None
    J = _matrix(doc["J"], "$.J", r, r) if doc.get("J") is not None else None
    omega = None
    if doc.get("omega") is not None:
        terms: dict[tuple[int, int], Fraction] = {}
        for n, e in enumerate(_list(doc["omega"], "$.omega")):
            path = f"$.omega[{n}]"
            e = _dict(e, path, {"i", "j", "c"}, {"i", "j", "c"})
            i, j = (_int(e[x], f"{path}.{x}", 1, r) for x in "ij")
            if i >= j:
                raise ParseError("omega entries need i < j", f"{path}.j")
            if (i - 1, j - 1) in terms:
                raise ParseError("duplicate omega entry", path)
            terms[(i - 1, j - 1)] = _scalar(e["c"], f"{path}.c")
        omega = FormVector.from_terms(r, 2, terms)
    eta = _scalar(doc["eta"], "$.eta") if doc.get("eta") is not None else None
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string", "$.name")
    try:
        return AlgebroidPresentation(r, struct, anchor, metric, J, omega, eta, name)
    except ModelError as exc:
        raise ParseError(str(exc), "$") from None


def parse_model(text: str) -> AlgebroidPresentation:
    """Parse a model file; syntax errors carry line:column, semantic errors a JSON path."""
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    except _FloatSeen as exc:
        raise ParseError(f"floating-point literal {exc.args[0]} not allowed; use a 'p/q' string", "") from None
    return model_from_dict(doc)


class _FloatSeen(ValueError):
    pass


def _reject_float(s: str):
    raise _FloatSeen(s)


def model_to_dict(p: AlgebroidPresentation) -> dict:
    doc: dict[str, Any] = {"rank": p.rank}
    if p.name:
        doc["name"] = p.name
    doc["structure"] = [
        {"i": i + 1, "j": j + 1, "k": k + 1, "c": format_scalar(c)} for (i, j, k), c in sorted(p.structure.items())
    ]
    doc["anchor"] = {"target_dim": p.n_base, "matrix": [[format_scalar(x) for x in row] for row in p.anchor.rows]}
    if p.metric is not None:
        doc["metric"] = [[format_scalar(x) for x in row] for row in p.metric.rows]
    if p.J is not None:
        doc["J"] = [[format_scalar(x) for x in row] for row in p.J.rows]
    if p.omega is not None:
        doc["omega"] = [{"i": i + 1, "j": j + 1, "c": format_scalar(c)} for (i, j), c in sorted(p.omega.terms().items())]
    if p.eta is not None:
        doc["eta"] = format_scalar(p.eta)
    return doc


def serialize_model(p: AlgebroidPresentation) -> str:
    return canonical_json(model_to_dict(p))


def model_hash(p: AlgebroidPresentation) -> str:
    return hashlib.sha256(serialize_model(p).encode()).hexdigest()


def bspec_from_dict(doc: Any) -> BManifoldSpec:
    doc = _dict(doc, "$", {"name", "bM", "bZ"}, {"bM"})
    bM = [_int(x, f"$.bM[{n}]", 0) for n, x in enumerate(_list(doc["bM"], "$.bM"))]
    bZ = [_int(x, f"$.bZ[{n}]", 0) for n, x in enumerate(_list(doc.get("bZ", []), "$.bZ"))]
    try:
        return BManifoldSpec(tuple(bM), tuple(bZ), name=str(doc.get("name", "")))
    except ModelError as exc:
        raise ParseError(str(exc), "$") from None


def parse_bspec(text: str) -> BManifoldSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return bspec_from_dict(doc)


# --- reports ---------------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Convert report values (exact scalars, matrices, forms, dataclasses) to plain JSON data."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, float)):
        return obj
    if isinstance(obj, (Fraction, GaussianRational)):
        return format_scalar(obj)
    if isinstance(obj, Matrix):
        return [[jsonable(x) for x in row] for row in obj.rows]
    if isinstance(obj, FormVector):
        return {"degree": obj.degree, "terms": {_label(I): format_scalar(c) for I, c in obj.terms().items()}}
    if isinstance(obj, Verdict):
        out = {"ok": obj.ok}
        if obj.witness is not None:
            out["witness"] = jsonable(obj.witness)
        if obj.note:
            out["note"] = obj.note
        return out
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _label(I) -> str:
    return "e" + "".join(str(i + 1) for i in I) if I else "1"


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def canonical_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
