"""JSON tuple documents and CSV sweep rows.

A tuple document looks like::

    {"kind": "classical", "eps_hint": 0.693, "metadata": {},
     "payload": [[0.6667, 0.3333], [0.3333, 0.6667]]}

    {"kind": "density", "payload": [  # one matrix per state, row-major
        [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]], ...]}

Density entries are ``[re, im]`` pairs; a bare number is read as a real entry.
Floats are written with ``repr``, which round-trips binary64 exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
import numbers

import numpy as np

from .dp import ClassicalTuple, DensityTuple, as_probability_vector
from .errors import InvalidInput, ParseError, ValidationError

KINDS = ("classical", "density")
SWEEP_COLUMNS = ("eps", "theta", "n", "d", "c", "t", "kind", "value")


def _real(x, loc):
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise ParseError(f"expected a number, got {type(x).__name__}", loc)
    x = float(x)
    if not math.isfinite(x):
        raise ParseError("non-finite number", loc)
    return x


def _complex(x, loc):
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError("complex entry must be a [re, im] pair", loc)
        return complex(_real(x[0], f"{loc}[0]"), _real(x[1], f"{loc}[1]"))
    return complex(_real(x, loc), 0.0)


def _rect(rows, loc, width=None):
    if not isinstance(rows, list) or not rows:
        raise ParseError("expected a non-empty list", loc)
    for i, r in enumerate(rows):
        if not isinstance(r, list):
            raise ParseError("expected a list", f"{loc}[{i}]")
        if width is None:
            width = len(r)
        elif len(r) != width:
            raise ParseError(f"ragged payload: row has {len(r)} entries, expected {width}", f"{loc}[{i}]")
    return width


def _located(exc: ValidationError, loc: str) -> ValidationError:
    detail = getattr(exc, "detail", "")
    out = ValidationError(exc.invariant, f"{loc}: {detail}" if detail else loc)
    out.location = loc
    return out


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}, got {kind!r}", "$.kind")
    if "payload" not in doc:
        raise ParseError("missing payload", "$.payload")
    eps_hint = doc.get("eps_hint")
    if eps_hint is not None:
        eps_hint = _real(eps_hint, "$.eps_hint")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in meta.items()):
        raise ParseError("metadata must map strings to strings", "$.metadata")
    return {"kind": kind, "eps_hint": eps_hint, "metadata": meta, "payload": doc["payload"]}


def parse_tuple(text: str):
    """Parse a tuple document into a ClassicalTuple or DensityTuple.

    Schema problems raise ParseError with a JSON-path location; invariant
    violations (normalization, positivity, trace) raise ValidationError.
    """
    return load_tuple(text)[0]


def load_tuple(text: str):
    """Like :func:`parse_tuple` but also returns the document header (kind, eps_hint, metadata)."""
    doc = parse_document(text)
    payload = doc.pop("payload")
    if not isinstance(payload, list):
        raise ParseError("payload must be a list", "$.payload")
    if len(payload) < 2:
        raise ValidationError("tuple size", f"need at least two entries, got {len(payload)}")
    if doc["kind"] == "classical":
        _rect(payload, "$.payload")
        rows = [[_real(x, f"$.payload[{i}][{k}]") for k, x in enumerate(r)] for i, r in enumerate(payload)]
        for i, r in enumerate(rows):
            try:
                as_probability_vector(r)
            except ValidationError as exc:
                raise _located(exc, f"$.payload[{i}]") from None
        return ClassicalTuple(np.array(rows)), doc

    mats = []
    dim = None
    for i, m in enumerate(payload):
        loc = f"$.payload[{i}]"
        w = _rect(m, loc)
        if len(m) != w:
            raise ParseError(f"matrix must be square, got {len(m)}x{w}", loc)
        if dim is None:
            dim = w
        elif w != dim:
            raise ValidationError("equal dimensions", f"{loc}: {w} vs {dim}")
        mats.append(np.array([[_complex(x, f"{loc}[{r}][{k}]") for k, x in enumerate(row)] for r, row in enumerate(m)]))
    for i, m in enumerate(mats):
        try:
            DensityTuple([m, m])
        except ValidationError as exc:
            raise _located(exc, f"$.payload[{i}]") from None
        except InvalidInput as exc:
            raise _located(ValidationError("Hermitian", str(exc)), f"$.payload[{i}]") from None
    return DensityTuple(mats), doc


def _num(x: float):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput("cannot emit a non-finite number")
    return x


def emit_tuple(t, eps_hint: float | None = None, metadata: dict | None = None) -> str:
    """Serialize a tuple; ``parse_tuple(emit_tuple(t))`` reproduces every float bit for bit."""
    if isinstance(t, ClassicalTuple):
        kind = "classical"
        payload = [[_num(x) for x in row] for row in t.vectors]
    elif isinstance(t, DensityTuple):
        kind = "density"
        payload = [[[[_num(z.real), _num(z.imag)] for z in row] for row in s] for s in t.states]
    else:
        raise InvalidInput(f"cannot emit {type(t).__name__}; need at least two states in a tuple type")
    doc = {"kind": kind}
    if eps_hint is not None:
        doc["eps_hint"] = _num(eps_hint)
    doc["metadata"] = {str(k): str(v) for k, v in (metadata or {}).items()}
    doc["payload"] = payload
    return json.dumps(doc, indent=1) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_sweep(rows) -> str:
    """CSV text with the fixed column order; each row is a mapping over ``SWEEP_COLUMNS``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_cell(r.get(col)) for col in SWEEP_COLUMNS])
    return buf.getvalue()
