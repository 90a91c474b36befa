"""Reading and writing the ``mcb-state/1`` text format.

::

    {"format": "mcb-state/1", "dims": [d1, ..., dN], "kind": "pure" | "density", "data": ...}

``pure`` data is a flat list of ``[re, im]`` pairs in canonical layout;
``density`` data is a list of rows of ``[re, im]`` pairs. Parsing is strict.
"""
import json
import math

import numpy as np

from mcbound.errors import McbError, StateLoadError
from mcbound.qstate import DensityMatrix, PureState

FORMAT = "mcb-state/1"
_KEYS = ("format", "dims", "kind", "data")


def _reject_constant(token):
    raise StateLoadError(f"non-finite number {token} is not allowed")


def _no_duplicates(pairs):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise StateLoadError(f"duplicate key {key!r}")
        obj[key] = value
    return obj


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _pair(v, where):
    if not isinstance(v, list) or len(v) != 2:
        raise StateLoadError("expected an [re, im] pair", where)
    if not all(_is_number(c) for c in v):
        raise StateLoadError("pair entries must be numbers", where)
    re, im = float(v[0]), float(v[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise StateLoadError("non-finite entry", where)
    return complex(re, im)


def parse_state(text):
    """Parse ``mcb-state/1`` text into a :class:`PureState` or :class:`DensityMatrix`."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise StateLoadError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise StateLoadError("top level must be an object", "$")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise StateLoadError(f"unknown field(s) {unknown}", "$")
    missing = [k for k in _KEYS if k not in doc]
    if missing:
        raise StateLoadError(f"missing field(s) {missing}", "$")
    if doc["format"] != FORMAT:
        raise StateLoadError(f"unsupported format {doc['format']!r}", "format")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateLoadError("dims must be a nonempty list of integers", "dims")
    if any(d < 2 for d in dims):
        raise StateLoadError("every dimension must be >= 2", "dims")
    size = math.prod(dims)
    kind = doc["kind"]
    data = doc["data"]
    if not isinstance(data, list):
        raise StateLoadError("data must be a list", "data")
    try:
        if kind == "pure":
            if len(data) != size:
                raise StateLoadError(f"expected {size} amplitudes, got {len(data)}", "data")
            amp = np.array([_pair(v, f"data[{i}]") for i, v in enumerate(data)], dtype=np.complex128)
            return PureState(tuple(dims), amp)
        if kind == "density":
            if len(data) != size:
                raise StateLoadError(f"expected {size} rows, got {len(data)}", "data")
            rows = []
            for i, row in enumerate(data):
                if not isinstance(row, list) or len(row) != size:
                    raise StateLoadError(f"expected a row of {size} pairs", f"data[{i}]")
                rows.append([_pair(v, f"data[{i}][{j}]") for j, v in enumerate(row)])
            return DensityMatrix(tuple(dims), np.array(rows, dtype=np.complex128))
    except StateLoadError:
        raise
    except McbError as exc:
        raise StateLoadError(str(exc), "data") from exc
    raise StateLoadError(f"kind must be 'pure' or 'density', got {kind!r}", "kind")


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        return parse_state(fh.read())


def _fmt_pair(z):
    return f"[{json.dumps(float(z.real))}, {json.dumps(float(z.imag))}]"


def format_state(state):
    """Serialize deterministically; floats use shortest round-trip repr."""
    head = f'{{\n  "format": "{FORMAT}",\n  "dims": {json.dumps(list(state.dims))},\n'
    if isinstance(state, PureState):
        body = ",\n    ".join(_fmt_pair(z) for z in state.amplitudes)
        return head + f'  "kind": "pure",\n  "data": [\n    {body}\n  ]\n}}\n'
    rows = ",\n    ".join("[" + ", ".join(_fmt_pair(z) for z in row) + "]" for row in state.matrix)
    return head + f'  "kind": "density",\n  "data": [\n    {rows}\n  ]\n}}\n'


def save_state(state, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_state(state))
