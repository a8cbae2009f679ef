"""Reading and writing state and channel files.

One JSON object per file::

    {"kind": "density" | "pure" | "channel", "dim": d, "data": [...]}

Complex entries are ``[re, im]`` pairs. Density data holds ``d*d`` pairs in
row-major order, pure data ``d`` pairs, and channel data a list of Kraus
matrices, each ``d*d`` pairs in row-major order. Numbers are written with 17
significant digits so values survive a round trip exactly.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .channels import KrausChannel, validate_kraus
from .errors import FidelityError, ParseError, ValidationError
from .states import DensityMatrix, PureState, pure_state, validate_density

KINDS = ("density", "pure", "channel")


def _num(x: float) -> str:
    return f"{x:.17g}"


def _pairs(values) -> str:
    return "[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in values) + "]"


def dumps(obj) -> str:
    if isinstance(obj, DensityMatrix):
        kind, dim, data = "density", obj.dim, _pairs(obj.matrix.reshape(-1))
    elif isinstance(obj, PureState):
        kind, dim, data = "pure", obj.dim, _pairs(obj.amplitudes)
    elif isinstance(obj, KrausChannel):
        kind, dim = "channel", obj.dim_q
        data = "[\n    " + ",\n    ".join(_pairs(k.reshape(-1)) for k in obj.kraus) + "\n  ]"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return f'{{\n  "kind": "{kind}",\n  "dim": {dim},\n  "data": {data}\n}}\n'


def _write(text: str, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def serialize_state(x: DensityMatrix | PureState, path) -> None:
    _write(dumps(x), path)


def serialize_channel(ch: KrausChannel, path) -> None:
    _write(dumps(ch), path)


def _complex_list(data, expected: int, field: str) -> np.ndarray:
    if not isinstance(data, list):
        raise ParseError(f"{field}: expected a list of [re, im] pairs")
    if len(data) != expected:
        raise ParseError(f"{field}: expected {expected} entries, found {len(data)}")
    out = np.empty(expected, dtype=np.complex128)
    for i, pair in enumerate(data):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ParseError(f"{field}[{i}]: expected [re, im] with two numbers, got {pair!r}")
        out[i] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise ParseError(f"{field}: non-finite entry")
    return out


def loads(text: str, source: str = "<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("kind", "dim", "data"):
        if key not in doc:
            raise ParseError(f"{source}: missing field '{key}'")
    kind, dim, data = doc["kind"], doc["dim"], doc["data"]
    if kind not in KINDS:
        raise ParseError(f"{source}: field 'kind' must be one of {KINDS}, got {kind!r}")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{source}: field 'dim' must be a positive integer, got {dim!r}")

    try:
        if kind == "density":
            m = _complex_list(data, dim * dim, "data").reshape(dim, dim)
            return _validated(validate_density, m, source)
        if kind == "pure":
            return _validated(pure_state, _complex_list(data, dim, "data"), source)
        if not isinstance(data, list) or not data:
            raise ParseError("data: expected a non-empty list of Kraus matrices")
        ops = [
            _complex_list(k, dim * dim, f"data[{i}]").reshape(dim, dim) for i, k in enumerate(data)
        ]
        return _validated(validate_kraus, ops, source)
    except ParseError as exc:
        raise ParseError(f"{source}: {exc}") from None


def _validated(fn, value, source):
    try:
        return fn(value)
    except FidelityError as exc:
        raise ValidationError(exc, source) from exc


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc


def parse_state_file(path) -> DensityMatrix | PureState:
    obj = loads(_read(path), str(path))
    if isinstance(obj, KrausChannel):
        raise ParseError(f"{path}: expected a state file, found kind 'channel'")
    return obj


def parse_channel_file(path) -> KrausChannel:
    obj = loads(_read(path), str(path))
    if not isinstance(obj, KrausChannel):
        raise ParseError(f"{path}: expected a channel file, found a state")
    return obj
