"""Deterministic JSON output.

Floats are printed with 17 significant digits and keys keep insertion
order, so rerunning a command reproduces its output byte for byte.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

SCHEMA = 1


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0.0" if math.copysign(1, x) > 0 else "-0.0"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def to_json(obj, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if dataclasses.is_dataclass(obj) and hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def state_to_dict(rho) -> dict:
    m = np.asarray(rho, dtype=complex)
    n = m.shape[0].bit_length() - 1
    return {"n_qubits": n, "entries": [[z.real, z.imag] for z in m.reshape(-1)]}


def state_from_dict(d: dict) -> np.ndarray:
    dim = 1 << int(d["n_qubits"])
    vals = np.array([complex(re, im) for re, im in d["entries"]])
    if vals.size != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {vals.size}")
    return vals.reshape(dim, dim)
