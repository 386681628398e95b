"""JSON file formats for witnesses, states and measurement records.

Witness file::

    {"name": "w3", "dims": [2, 2, 2], "split": [0],
     "matrix": [[re, im], ...],          # row-major, flat or nested by rows
     "class_tag": "genuine-N-partite", "normalization_note": "..."}

``pauli`` (a string such as ``"3*I - 0.5*(Z1 Z2 + I)"``) may replace
``matrix``. Split indices are 0-based tensor-factor positions.

State file: ``{"dims": [...], "matrix": ...}`` or ``{"dims": [...], "vector": ...}``.

Measurement file: ``{"records": [{"witness": ..., "c": ..., "sigma": ..., "label": ...}],
"measures": [...]}`` or a bare list of records. ``witness`` is a catalog
name or a witness file path relative to the measurement file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import BIPARTITE, CATALOG, Witness, get_witness
from .operators import DensityMatrix, DimensionError, HermitianOperator
from .pauli import PauliSyntaxError, infer_qubits, parse_pauli


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def read_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _complex_entries(raw, where: str) -> np.ndarray:
    """Accept ``[re, im]`` pairs or plain reals, flat or nested by rows."""
    def entry(x):
        if isinstance(x, (int, float)) and not isinstance(x, bool):
            return complex(x)
        if (isinstance(x, list) and len(x) == 2
                and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)):
            return complex(x[0], x[1])
        raise InputError(f"{where}: bad matrix entry {x!r}; expected a number or [re, im]")

    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}: matrix must be a nonempty list")
    nested = isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], list)
    if nested:
        return np.array([[entry(x) for x in row] for row in raw], dtype=complex)
    # rows of reals would be ambiguous with [re, im] pairs only for 2-entry rows
    if isinstance(raw[0], list) and len(raw[0]) != 2:
        return np.array([[entry(x) for x in row] for row in raw], dtype=complex)
    return np.array([entry(x) for x in raw], dtype=complex)


def _as_square(a: np.ndarray, dim: int, where: str) -> np.ndarray:
    if a.ndim == 1:
        if a.size != dim * dim:
            raise InputError(f"{where}: {a.size} entries, expected {dim * dim} for D = {dim}")
        return a.reshape(dim, dim)
    if a.shape != (dim, dim):
        raise InputError(f"{where}: matrix shape {a.shape}, expected ({dim}, {dim})")
    return a


def _dims(d, where: str) -> tuple[int, ...]:
    if not isinstance(d, list) or not d or not all(isinstance(k, int) for k in d):
        raise InputError(f"{where}: dims must be a nonempty list of integers")
    return tuple(d)


def witness_from_dict(d: dict, where: str = "witness") -> Witness:
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected a JSON object")
    try:
        if "pauli" in d:
            expr = d["pauli"]
            n = len(d["dims"]) if "dims" in d else infer_qubits(expr)
            dims = _dims(d["dims"], where) if "dims" in d else (2,) * n
            if any(k != 2 for k in dims):
                raise InputError(f"{where}: Pauli expressions need qubit dims")
            mat = parse_pauli(expr, n)
        elif "matrix" in d:
            if "dims" not in d:
                raise InputError(f"{where}: 'dims' is required with 'matrix'")
            dims = _dims(d["dims"], where)
            mat = _as_square(_complex_entries(d["matrix"], where), int(np.prod(dims)), where)
        else:
            raise InputError(f"{where}: need 'matrix' or 'pauli'")
        split = tuple(d["split"]) if d.get("split") is not None else None
        op = HermitianOperator(mat, dims, split)
    except PauliSyntaxError as e:
        raise InputError(f"{where}: pauli: {e}") from None
    except (DimensionError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"{where}: {e}") from None
    return Witness(op, d.get("class_tag", BIPARTITE), d.get("normalization_note", ""),
                   d.get("name", ""))


def load_witness(ref, base_dir=None) -> Witness:
    """Catalog name or path to a witness file."""
    if isinstance(ref, Witness):
        return ref
    ref = str(ref)
    if ref in CATALOG:
        return get_witness(ref)
    path = Path(ref)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    if not path.exists():
        raise InputError(f"unknown witness {ref!r}: not a catalog name and no such file")
    w = witness_from_dict(read_json(path), str(path))
    if not w.name:
        w = Witness(w.op, w.class_tag, w.normalization_note, path.stem, w.notes)
    return w


def matrix_to_pairs(m) -> list:
    m = np.asarray(m)
    return [[float(z.real), float(z.imag)] for z in m.ravel()]


def witness_to_dict(w: Witness) -> dict:
    return {
        "name": w.name,
        "dims": list(w.dims),
        "split": list(w.split) if w.split is not None else None,
        "matrix": matrix_to_pairs(w.matrix),
        "class_tag": w.class_tag,
        "normalization_note": w.normalization_note,
    }


def dump_witness(w: Witness, path) -> None:
    Path(path).write_text(json.dumps(witness_to_dict(w), indent=1) + "\n")


def state_from_dict(d: dict, where: str = "state") -> DensityMatrix:
    if not isinstance(d, dict) or "dims" not in d:
        raise InputError(f"{where}: expected an object with 'dims'")
    dims = _dims(d["dims"], where)
    D = int(np.prod(dims))
    try:
        if "vector" in d:
            v = _complex_entries(d["vector"], where)
            if v.ndim != 1 or v.size != D:
                raise InputError(f"{where}: vector needs {D} entries")
            return DensityMatrix.from_vector(v, dims, d.get("split"))
        if "matrix" in d:
            m = _as_square(_complex_entries(d["matrix"], where), D, where)
            return DensityMatrix(m, dims, d.get("split"))
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: need 'matrix' or 'vector'")


def load_state(path) -> DensityMatrix:
    return state_from_dict(read_json(path), str(path))


def state_to_dict(rho) -> dict:
    return {"dims": list(rho.dims), "matrix": matrix_to_pairs(rho.matrix)}


@dataclass(frozen=True)
class MeasurementRecord:
    witness: str
    c: float
    sigma: float = 0.0
    label: str = ""

    def to_dict(self) -> dict:
        return {"witness": self.witness, "c": self.c, "sigma": self.sigma, "label": self.label}


def record_from_dict(d: dict, where: str) -> MeasurementRecord:
    if not isinstance(d, dict):
        raise InputError(f"{where}: record must be an object")
    for key in ("witness", "c"):
        if key not in d:
            raise InputError(f"{where}: missing {key!r}")
    try:
        c = float(d["c"])
        sigma = float(d.get("sigma", 0.0))
    except (TypeError, ValueError):
        raise InputError(f"{where}: c and sigma must be numbers") from None
    if not np.isfinite(c) or not np.isfinite(sigma) or sigma < 0:
        raise InputError(f"{where}: c must be finite and sigma >= 0")
    return MeasurementRecord(str(d["witness"]), c, sigma, str(d.get("label", "")))


def load_measurements(path) -> dict:
    """Returns ``{"records": [...], "measures": [...] or None, "base_dir": ...}``."""
    data = read_json(path)
    if isinstance(data, list):
        data = {"records": data}
    if not isinstance(data, dict) or not isinstance(data.get("records"), list):
        raise InputError(f"{path}: expected a list of records or {{'records': [...]}}")
    recs = [record_from_dict(r, f"{path}: record {i}") for i, r in enumerate(data["records"])]
    return {"records": recs, "measures": data.get("measures"),
            "base_dir": str(Path(path).resolve().parent)}
