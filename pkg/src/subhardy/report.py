"""JSON reports and space description files.

Floats are written with 17 significant digits, so reloading a report gives
back bit-identical numbers.  Complex numbers are ``[re, im]`` pairs.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .core import DiagonalSpace, GramSpace, WeightSequence
from .errors import SubHardyError

SCHEMA = 1


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if dataclasses.is_dataclass(obj):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_")
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _fmt_float(x):
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = "%.17g" % x
    if not any(ch in s for ch in ".eEn"):
        s += ".0"
    return s


def dumps(obj, indent=2, _level=0):
    """JSON text with floats rendered at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj) or all(
            isinstance(v, list) and all(not isinstance(u, (dict, list)) for u in v) for v in obj
        ):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def analysis_report(analysis):
    """Versioned report dictionary for an Analysis."""
    return {
        "schema": SCHEMA,
        "space": {
            "name": analysis.name,
            "kind": analysis.kind,
            "ambient_dim": analysis.ambient_dim,
            "dim": analysis.dim,
            "n_max": analysis.n_max,
        },
        "hypotheses": to_jsonable(analysis.hypotheses),
        "structure": to_jsonable(analysis.structure),
        "structure_error": analysis.structure_error,
        "contraction": to_jsonable(analysis.contraction),
        "exit_code": analysis.exit_code,
    }


def loads(text):
    data = json.loads(text)
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise SubHardyError(f"unsupported report schema (expected {SCHEMA})")
    return data


# -- space description files -------------------------------------------------

def _number(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SubHardyError(f"complex entries must be [re, im] pairs, got {v!r}")
        return complex(float(_number(v[0]).real), float(_number(v[1]).real))
    if isinstance(v, bool):
        raise SubHardyError("booleans are not numbers")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(float(v))
        except ValueError:
            raise SubHardyError(f"not a decimal number: {v!r}") from None
    raise SubHardyError(f"not a number: {v!r}")


def space_from_dict(d):
    """Build a space from ``{"kind": "diagonal", "beta": [...]}`` or
    ``{"kind": "gram", "ambient_dim": D, "basis": [[...], ...], "gram": [[...], ...]}``.

    ``basis`` lists the m basis vectors, each with D coefficients.
    """
    if not isinstance(d, dict):
        raise SubHardyError("space description must be a JSON object")
    kind = d.get("kind")
    if kind == "diagonal":
        beta = [_number(v) for v in d.get("beta", [])]
        if any(b.imag for b in beta):
            raise SubHardyError("beta must be real")
        return DiagonalSpace(WeightSequence([b.real for b in beta]))
    if kind == "gram":
        try:
            D = int(d["ambient_dim"])
            V = np.array([[_number(v) for v in row] for row in d["basis"]], dtype=complex)
            G = np.array([[_number(v) for v in row] for row in d["gram"]], dtype=complex)
        except (KeyError, TypeError) as e:
            raise SubHardyError(f"malformed gram space description: {e}") from None
        if V.ndim != 2 or V.shape[1] != D:
            raise SubHardyError(f"each basis vector must have ambient_dim={D} coefficients")
        return GramSpace(V.T, G)
    raise SubHardyError(f"unknown space kind {kind!r}")


def space_to_dict(space):
    """Inverse of :func:`space_from_dict`, numbers as 17-digit decimal strings."""

    def num(z):
        z = complex(z)
        if z.imag == 0:
            return "%.17g" % z.real
        return ["%.17g" % z.real, "%.17g" % z.imag]

    if isinstance(space, DiagonalSpace):
        return {"kind": "diagonal", "beta": ["%.17g" % b for b in space.beta]}
    return {
        "kind": "gram",
        "ambient_dim": space.ambient_dim,
        "basis": [[num(v) for v in col] for col in space.basis.T],
        "gram": [[num(v) for v in row] for row in space.gram],
    }


def load_space(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise SubHardyError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise SubHardyError(f"{path} is not valid JSON: {e}") from None
    return space_from_dict(data)
