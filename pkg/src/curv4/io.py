"""JSON interchange for curvature operators and reports.

A tensor document looks like::

    {"basis": "lex-eij",
     "matrix": [[...6 numbers...], ...6 rows...],
     "tolerance": 1e-10,
     "metadata": {"kind": "cp2", "params": {"S": 12.0}, "volume": ..., "lambda1": 6.0}}

Only ``matrix`` is required.  Floats are written with Python's shortest
round-trip representation, so dumping is exact and byte-stable.
"""
import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from .curvature import BIANCHI_TOL, CurvatureOperator, validate
from .errors import ParseError
from .lambda2 import FrameRotation, Plane

BASIS = "lex-eij"


def to_jsonable(obj):
    """Recursively convert reports, arrays and numpy scalars into plain JSON values."""
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return obj + 0.0 if math.isfinite(obj) else None
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if isinstance(obj, CurvatureOperator):
        return to_jsonable(obj.matrix)
    if isinstance(obj, Plane):
        return {"u": to_jsonable(obj.u), "v": to_jsonable(obj.v)}
    if isinstance(obj, FrameRotation):
        return {"p": to_jsonable(obj.p), "q": to_jsonable(obj.q),
                "matrix": to_jsonable(obj.matrix)}
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return json.dumps(to_jsonable(obj), indent=indent, allow_nan=False, ensure_ascii=False)


def tensor_document(R, tolerance=BIANCHI_TOL, metadata=None):
    doc = {"basis": BASIS, "matrix": to_jsonable(R.matrix), "tolerance": tolerance}
    if metadata:
        doc["metadata"] = to_jsonable(metadata)
    return doc


def model_document(space):
    meta = {"kind": space.kind, "params": dict(space.params), "volume": space.volume}
    if space.quotient_factor != 1:
        meta["quotient_factor"] = space.quotient_factor
    if space.lambda1 is not None:
        meta["lambda1"] = space.lambda1
    return tensor_document(space.curvature, metadata=meta)


def parse_tensor(doc, tolerance=None):
    """Validate a decoded document; returns (operator, metadata)."""
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ParseError("tensor document must be an object with a 'matrix' field")
    basis = doc.get("basis", BASIS)
    if basis != BASIS:
        raise ParseError(f"unsupported basis {basis!r}, expected {BASIS!r}")
    try:
        M = np.array(doc["matrix"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix is not numeric: {exc}") from None
    if M.shape != (6, 6):
        raise ParseError(f"matrix must be 6x6, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ParseError("matrix has non-finite entries")
    if tolerance is None:
        tolerance = float(doc.get("tolerance", BIANCHI_TOL))
    return validate(M, tol=tolerance), dict(doc.get("metadata") or {})


def load_tensor(path, tolerance=None):
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return parse_tensor(doc, tolerance)


def save_tensor(path, R, tolerance=BIANCHI_TOL, metadata=None):
    Path(path).write_text(dumps(tensor_document(R, tolerance, metadata)) + "\n",
                          encoding="utf-8")
