"""JSON instance files and certificate / report files.

Complex numbers are ``[re, im]`` pairs; matrices are lists of rows. Floats
are written with Python's shortest round-trip representation, so
``load(save(x))`` is bit-exact. Infinite bounds are written as the string
``"Unbounded"`` (``"-Unbounded"`` for a negative infinite margin) and NaN as
``null``. Output documents use a fixed key order and fixed separators, so
the same input gives byte-identical output.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from ._validation import MAX_DIM
from .errors import MatrixTooLargeError, ParseError, SchemaError
from .frames import BiframePair, FrameSequence
from .instances import Instance
from .tolerances import DEFAULT, Tolerances

SCHEMA_VERSION = "1"
UNBOUNDED_TOKEN = "Unbounded"

_OPTIONAL_MATRICES = ("t",)


# ----------------------------------------------------------------- encoding

def encode_float(x: float):
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return UNBOUNDED_TOKEN if x > 0 else "-" + UNBOUNDED_TOKEN
    return x


def decode_float(v, field: str = "value") -> float:
    if v == UNBOUNDED_TOKEN:
        return math.inf
    if v == "-" + UNBOUNDED_TOKEN:
        return -math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(field, f"expected a number, got {v!r}")
    return float(v)


def encode_complex_array(a) -> list:
    """Nested lists with complex entries as ``[re, im]``."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 0:
        z = complex(arr)
        return [encode_float(z.real), encode_float(z.imag)]
    return [encode_complex_array(row) for row in arr]


def _decode_complex(v, field: str) -> complex:
    if not (isinstance(v, list) and len(v) == 2):
        raise SchemaError(field, f"expected a [re, im] pair, got {v!r}")
    re, im = (decode_float(c, field) for c in v)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise SchemaError(field, "entries must be finite")
    return complex(re, im)


def decode_vector(v, field: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(v, list):
        raise SchemaError(field, "expected an array of [re, im] pairs")
    out = np.array([_decode_complex(z, f"{field}[{i}]") for i, z in enumerate(v)],
                   dtype=np.complex128).reshape(len(v))
    if dim is not None and out.shape[0] != dim:
        raise SchemaError(field, f"expected length {dim}, got {out.shape[0]}")
    return out


def decode_matrix(v, field: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    if not isinstance(v, list):
        raise SchemaError(field, "expected an array of rows")
    if rows is not None and len(v) != rows:
        raise SchemaError(field, f"expected {rows} rows, got {len(v)}")
    if len(v) > MAX_DIM:
        raise MatrixTooLargeError(f"{field}: {len(v)} rows exceeds {MAX_DIM}")
    decoded = [decode_vector(r, f"{field}[{i}]", cols) for i, r in enumerate(v)]
    if not decoded:
        return np.zeros((0, cols or 0), dtype=np.complex128)
    width = decoded[0].shape[0]
    for i, r in enumerate(decoded):
        if r.shape[0] != width:
            raise SchemaError(f"{field}[{i}]", f"ragged array: expected {width} entries")
    return np.stack(decoded)


def to_jsonable(value: Any) -> Any:
    """Convert reports, arrays and scalars to plain JSON values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return encode_float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex_array(value)
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return encode_complex_array(value)
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Tolerances):
        return to_jsonable(value.as_dict())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dumps(doc: Any) -> str:
    """Canonical text: insertion key order, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(doc), indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def digest(doc: dict) -> str:
    """sha256 of the compact, key-sorted form of ``doc``."""
    text = json.dumps(to_jsonable(doc), sort_keys=True, separators=(",", ":"),
                      allow_nan=False, ensure_ascii=True)
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- instances

def instance_to_dict(inst: Instance) -> dict:
    ex = inst.extras
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "name": inst.name,
                           "provenance": inst.provenance}
    if inst.seed is not None:
        doc["seed"] = inst.seed
    if inst.truncation_dim is not None:
        doc["truncation_dim"] = inst.truncation_dim
    doc["dim"] = inst.dim
    doc["x_vectors"] = encode_complex_array(inst.pair.x.vectors)
    doc["y_vectors"] = encode_complex_array(inst.pair.y.vectors)
    doc["k"] = encode_complex_array(inst.k)
    if ex.get("t") is not None:
        doc["t"] = encode_complex_array(ex["t"])
    if ex.get("factors") is not None:
        doc["factors"] = [encode_complex_array(f) for f in ex["factors"]]
    if ex.get("alphas") is not None:
        doc["alphas"] = [encode_complex_array(complex(a)) for a in ex["alphas"]]
    if ex.get("z") is not None:
        doc["z_vectors"] = encode_complex_array(ex["z"].vectors)
    if ex.get("power") is not None:
        doc["power"] = int(ex["power"])
    if inst.claimed_bounds is not None:
        doc["claimed_bounds"] = [encode_float(b) for b in inst.claimed_bounds]
    return doc


def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(key, "required field is missing")
    return doc[key]


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {version!r}")
    dim = _require(doc, "dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SchemaError("dim", f"expected a positive integer, got {dim!r}")
    if dim > MAX_DIM:
        raise MatrixTooLargeError(f"dim {dim} exceeds {MAX_DIM}")
    xv = decode_matrix(_require(doc, "x_vectors"), "x_vectors", cols=dim)
    yv = decode_matrix(_require(doc, "y_vectors"), "y_vectors", cols=dim)
    if xv.shape[0] != yv.shape[0]:
        raise SchemaError("y_vectors", f"expected {xv.shape[0]} vectors to match x_vectors, "
                                       f"got {yv.shape[0]}")
    k = decode_matrix(_require(doc, "k"), "k", rows=dim, cols=dim)
    pair = BiframePair(FrameSequence(xv, dim), FrameSequence(yv, dim))

    extras: dict[str, Any] = {}
    for key in _OPTIONAL_MATRICES:
        if doc.get(key) is not None:
            extras[key] = decode_matrix(doc[key], key, rows=dim, cols=dim)
    if doc.get("factors") is not None:
        fs = doc["factors"]
        if not isinstance(fs, list):
            raise SchemaError("factors", "expected an array of matrices")
        extras["factors"] = [decode_matrix(f, f"factors[{i}]", rows=dim, cols=dim)
                             for i, f in enumerate(fs)]
    if doc.get("alphas") is not None:
        extras["alphas"] = list(decode_vector(doc["alphas"], "alphas"))
    if doc.get("z_vectors") is not None:
        zv = decode_matrix(doc["z_vectors"], "z_vectors", rows=xv.shape[0], cols=dim)
        extras["z"] = FrameSequence(zv, dim)
    if doc.get("power") is not None:
        power = doc["power"]
        if isinstance(power, bool) or not isinstance(power, int) or power < 1:
            raise SchemaError("power", f"expected a positive integer, got {power!r}")
        extras["power"] = power

    claimed = None
    if doc.get("claimed_bounds") is not None:
        cb = doc["claimed_bounds"]
        if not (isinstance(cb, list) and len(cb) == 2):
            raise SchemaError("claimed_bounds", "expected [A, B]")
        claimed = (decode_float(cb[0], "claimed_bounds[0]"),
                   decode_float(cb[1], "claimed_bounds[1]"))
    trunc = doc.get("truncation_dim")
    if trunc is not None and (isinstance(trunc, bool) or not isinstance(trunc, int)):
        raise SchemaError("truncation_dim", f"expected an integer, got {trunc!r}")
    seed = doc.get("seed")
    name = doc.get("name", "instance")
    if not isinstance(name, str):
        raise SchemaError("name", "expected a string")
    return Instance(name, pair, k, extras, provenance=doc.get("provenance", "file"),
                    seed=seed, truncation_dim=trunc, claimed_bounds=claimed)


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_instance(path) -> Instance:
    path = Path(path)
    return instance_from_dict(parse_json(path.read_text(encoding="utf-8"), str(path)))


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)), encoding="utf-8")


def load_matrix(path, default_field: str = "t") -> np.ndarray:
    """A square matrix from a bare ``[[...]]`` file, a ``{"matrix": ...}``
    object, or an instance file (its ``default_field`` member)."""
    path = Path(path)
    doc = parse_json(path.read_text(encoding="utf-8"), str(path))
    if isinstance(doc, list):
        return decode_matrix(doc, "$")
    if isinstance(doc, dict):
        if "matrix" in doc:
            return decode_matrix(doc["matrix"], "matrix")
        if "schema_version" in doc:
            inst = instance_from_dict(doc)
            if default_field == "k":
                return inst.k
            m = inst.extras.get(default_field)
            if m is None:
                raise SchemaError(default_field, "instance file has no such matrix")
            return m
    raise SchemaError("$", "expected a matrix, a {\"matrix\": ...} object or an instance file")


# ------------------------------------------------------------- certificates

def report_document(kind: str, report: Any, instance_doc: dict | None = None,
                    tols: Tolerances = DEFAULT, extra: dict | None = None) -> dict:
    """Wrap ``report`` as a certificate file: version, digest, tolerances, body."""
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": kind}
    doc["input_digest"] = None if instance_doc is None else digest(instance_doc)
    doc["tolerances"] = tols.as_dict()
    if extra:
        doc.update(extra)
    doc[kind] = report
    return to_jsonable(doc)


def save_certificate(report: Any, path, kind: str = "certificate",
                     instance_doc: dict | None = None, tols: Tolerances = DEFAULT) -> None:
    Path(path).write_text(dumps(report_document(kind, report, instance_doc, tols)),
                          encoding="utf-8")
