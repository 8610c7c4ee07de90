"""JSON encodings.

Integers are written as decimal strings so that arbitrary precision
survives any JSON consumer; on input both strings and JSON numbers are
accepted.
"""
from __future__ import annotations

import json
from typing import Any, Sequence

from .quadratic import FORM_PARAMETERS, FormParameter, LambdaSub, QModMorphism, QuadraticModule
from .reduction import HVector, Move, move_from_json, word_to_json
from .simplicial import SemiSimplicialSet, SimplicialComplex


class FormatError(ValueError):
    """Input that does not match the expected JSON layout."""


def _int(x: Any) -> int:
    if isinstance(x, bool):
        raise FormatError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise FormatError(f"expected an integer, got {x!r}")


def _ints(xs: Any) -> tuple[int, ...]:
    if not isinstance(xs, list):
        raise FormatError(f"expected a list, got {type(xs).__name__}")
    return tuple(_int(x) for x in xs)


def _matrix(rows: Any) -> tuple[tuple[int, ...], ...]:
    if not isinstance(rows, list):
        raise FormatError("expected a list of rows")
    return tuple(_ints(r) for r in rows)


def encode_int(x: int) -> str:
    return str(int(x))


def encode_vector(v: Sequence[int]) -> list[str]:
    return [encode_int(x) for x in v]


def encode_matrix(A: Sequence[Sequence[int]]) -> list[list[str]]:
    return [encode_vector(r) for r in A]


# --- form parameters and modules -------------------------------------------


def param_from_json(eps: Any, lam: Any) -> FormParameter:
    e = _int(eps)
    try:
        sub = LambdaSub(lam)
    except ValueError:
        raise FormatError(f"unknown lambda {lam!r}") from None
    try:
        return FormParameter(e, sub)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def param_from_label(label: str) -> FormParameter:
    """Parse ``+1,zero`` / ``-1,even`` / ``-1,all`` (or the short names ``sym``, ``even``, ``all``)."""
    short = {"sym": FORM_PARAMETERS[0], "even": FORM_PARAMETERS[1], "all": FORM_PARAMETERS[2]}
    if label in short:
        return short[label]
    try:
        eps, lam = label.strip("()").split(",")
    except ValueError:
        raise FormatError(f"bad form parameter {label!r}") from None
    return param_from_json(eps, lam.strip())


def module_to_json(M: QuadraticModule) -> dict:
    return {
        "epsilon": M.param.epsilon,
        "lambda": M.param.lambda_sub.value,
        "gram": encode_matrix(M.gram),
        "mu": encode_vector(M.mu),
    }


def module_from_json(d: Any) -> QuadraticModule:
    if not isinstance(d, dict):
        raise FormatError("a module must be a JSON object")
    for key in ("epsilon", "lambda", "gram"):
        if key not in d:
            raise FormatError(f"module is missing {key!r}")
    param = param_from_json(d["epsilon"], d["lambda"])
    gram = _matrix(d["gram"])
    mu = _ints(d["mu"]) if "mu" in d else ()
    return QuadraticModule(param, gram, mu)


def morphism_to_json(f: QModMorphism) -> dict:
    return {"matrix": encode_matrix(f.matrix)}


def matrix_from_json(d: Any) -> tuple[tuple[int, ...], ...]:
    if isinstance(d, dict):
        if "matrix" not in d:
            raise FormatError("morphism is missing 'matrix'")
        d = d["matrix"]
    return _matrix(d)


def vector_from_json(d: Any) -> tuple[int, ...]:
    if isinstance(d, dict):
        d = d.get("vector", d.get("coords"))
    return _ints(d)


def hvector_from_json(d: Any, param: FormParameter) -> HVector:
    try:
        return HVector(param, vector_from_json(d))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def word_from_json(d: Any) -> list[Move]:
    if not isinstance(d, list):
        raise FormatError("a word must be a list of move records")
    try:
        return [move_from_json(m) for m in d]
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad move record: {exc}") from None


# --- complexes -------------------------------------------------------------


def complex_to_json(X: SimplicialComplex) -> dict:
    out: dict[str, Any] = {
        "vertices": encode_int(len(X.vertices)),
        "facets": [encode_vector(f) for f in sorted(X.facets)],
        "flag": X.is_flag,
    }
    if X.is_flag:
        out["edges"] = [encode_vector(e) for e in X.faces(1)]
    return out


def complex_from_json(d: Any) -> SimplicialComplex | SemiSimplicialSet:
    """Simplicial complex (facets, or edges when flag) or a semisimplicial set.

    ``vertices`` may be a count (vertices ``0..n-1``) or an explicit list.
    A semisimplicial set is given as ``{"semisimplicial": true, "counts":
    [...], "faces": [[[...], ...], ...]}`` where ``faces[p-1][j]`` lists the
    face indices ``d_0 .. d_p`` of the ``j``-th ``p``-simplex.
    """
    if not isinstance(d, dict):
        raise FormatError("a complex must be a JSON object")
    if d.get("semisimplicial"):
        counts = _ints(d.get("counts"))
        faces = d.get("faces", [])
        if not isinstance(faces, list):
            raise FormatError("faces must be a list")
        try:
            return SemiSimplicialSet(counts, [[_ints(s) for s in level] for level in faces])
        except (ValueError, IndexError) as exc:
            raise FormatError(str(exc)) from None
    verts = d.get("vertices", [])
    if isinstance(verts, list):
        vertex_list = list(_ints(verts))
    else:
        vertex_list = list(range(_int(verts)))
    if d.get("flag"):
        if "edges" not in d:
            raise FormatError("flag complex needs 'edges'")
        edges = [_ints(e) for e in d["edges"]]
        if any(len(e) != 2 for e in edges):
            raise FormatError("edges must have two vertices")
        return SimplicialComplex.flag(vertex_list, edges)
    if "facets" not in d:
        raise FormatError("complex needs 'facets'")
    return SimplicialComplex([_ints(f) for f in d["facets"]], vertex_list)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def flatten(obj: Any, prefix: str = "") -> dict[str, Any]:
    """Dotted-key view of a nested report, for CSV."""
    out: dict[str, Any] = {}
    if isinstance(obj, dict):
        for k in obj:
            out.update(flatten(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            out.update(flatten(x, f"{prefix}{i}."))
    else:
        out[prefix[:-1] if prefix else "value"] = json.dumps(obj) if isinstance(obj, list) else obj
    return out
