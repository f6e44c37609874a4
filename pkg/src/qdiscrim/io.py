"""
JSON file formats.

Complex numbers are two-element arrays ``[re, im]``; matrices are row-major nested
lists.  Floats are written with Python's shortest round-tripping repr, so
write -> read -> write is byte-identical.

Gate set file::

    {"d": 2, "gates": [{"name": "I", "matrix": [[[1.0, 0.0], [0.0, 0.0]], ...]}, ...]}

Density file::

    {"d": 2, "matrix": [[[0.5, 0.0], [0.0, 0.0]], ...]}
"""

import json

import numpy as np

from .discrimination import DensityOperator
from .gates import GateSet

GATESET_LOAD_TOL = 1e-8


class FormatError(ValueError):
    pass


def _pair(z):
    # "+ 0.0" folds -0.0 into 0.0 so equal matrices serialize identically
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def encode_matrix(M):
    M = np.asarray(M, dtype=np.complex128)
    return [[_pair(z) for z in row] for row in M]


def encode_vector(v):
    return [_pair(z) for z in np.asarray(v, dtype=np.complex128).reshape(-1)]


def decode_matrix(data):
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not a nested numeric array: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"matrix must have shape (rows, cols, 2), got {arr.shape}")
    out = np.empty(arr.shape[:2], dtype=np.complex128)
    out.real = arr[..., 0]
    out.imag = arr[..., 1]
    return out


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode_matrix(obj) if obj.ndim == 2 else encode_vector(obj)
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, default=_jsonable) + "\n"


def gateset_to_dict(gates):
    return {
        "d": gates.d,
        "gates": [{"name": n, "matrix": encode_matrix(U)} for n, U in gates],
    }


def gateset_from_dict(data):
    try:
        d = int(data["d"])
        entries = data["gates"]
        names = [g["name"] for g in entries]
        mats = [decode_matrix(g["matrix"]) for g in entries]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed gate set: {exc}") from exc
    if not names:
        raise FormatError("gate set is empty")
    try:
        return GateSet(d, names, mats, unitary_tol=GATESET_LOAD_TOL)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def density_to_dict(rho):
    M = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return {"d": int(M.shape[0]), "matrix": encode_matrix(M)}


def density_from_dict(data):
    try:
        M = decode_matrix(data["matrix"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed density: {exc}") from exc
    if "d" in data and M.shape != (data["d"], data["d"]):
        raise FormatError(f"density shape {M.shape} does not match d={data['d']}")
    try:
        return DensityOperator(M)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_gateset(path, gates):
    with open(path, "w") as fh:
        fh.write(dumps(gateset_to_dict(gates)))


def read_gateset(path):
    return gateset_from_dict(_read_json(path))


def write_density(path, rho):
    with open(path, "w") as fh:
        fh.write(dumps(density_to_dict(rho)))


def read_density(path):
    return density_from_dict(_read_json(path))
