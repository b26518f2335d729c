"""JSON encodings for the library's objects.

Exact scalars travel as strings (``"3/4"``, ``"1/2+1*i"``), floats as
numbers, complex floats as ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .exact import GaussQ, Subspace, format_scalar, parse_scalar
from .poset import Poset, parse_poset
from .representation import SubspaceRep


class FormatError(ValueError):
    pass


def scalar_to_json(x) -> str:
    return format_scalar(x)


def scalar_from_json(x):
    if isinstance(x, bool):
        raise FormatError(f"not a scalar: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_scalar(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a scalar: {x!r}") from exc
    raise FormatError(f"exact scalars must be strings or integers, got {x!r}")


def matrix_to_json(m) -> list:
    return [[scalar_to_json(x) for x in row] for row in m]


def matrix_from_json(rows) -> list:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise FormatError("matrix must be an array of arrays")
    if len({len(r) for r in rows}) > 1:
        raise FormatError("ragged matrix")
    return [[scalar_from_json(x) for x in r] for r in rows]


def weight_to_json(chi: dict) -> dict:
    return {str(a): scalar_to_json(Fraction(v)) for a, v in chi.items()}


def weight_from_json(data, poset: Poset) -> dict:
    if isinstance(data, list):
        if len(data) != len(poset):
            raise FormatError("weight list length differs from the poset size")
        data = dict(zip(poset.elements, data))
    if not isinstance(data, dict):
        raise FormatError("weight must be an object or array")
    missing = set(poset.elements) - set(data)
    if missing:
        raise FormatError(f"weight misses elements {sorted(missing)}")
    return {a: scalar_from_json(data[a]) for a in poset.elements}


def rep_to_json(r: SubspaceRep) -> dict:
    return {
        "poset": r.poset.to_json(),
        "ambient_dim": r.ambient_dim,
        "spaces": {str(a): matrix_to_json(r.spaces[a].basis) for a in r.poset.elements},
    }


def rep_from_json(data) -> SubspaceRep:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        poset = parse_poset(data["poset"])
        n = int(data["ambient_dim"])
        spaces = data["spaces"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"representation JSON needs poset, ambient_dim, spaces: {exc}") from exc
    vectors = {}
    for a in poset.elements:
        rows = matrix_from_json(spaces.get(a, []))
        if any(len(row) != n for row in rows):
            raise FormatError(f"basis vectors of {a!r} must have length {n}")
        vectors[a] = rows
    extra = set(spaces) - set(poset.elements)
    if extra:
        raise FormatError(f"spaces for unknown elements {sorted(extra)}")
    return SubspaceRep.from_vectors(poset, n, vectors)


def subspace_to_json(s: Subspace | None):
    return None if s is None else matrix_to_json(s.basis)


def float_matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.abs(m.imag).max(initial=0.0) > 0:
        return [[[float(x.real), float(x.imag)] for x in row] for row in m]
    return [[float(x) for x in row] for row in np.real(m)]


def float_matrix_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 3:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != 2:
        raise FormatError("expected a 2-d float matrix")
    return arr.astype(complex)


def stability_to_json(report) -> dict:
    out = {
        "verdict": report.verdict,
        "slack": None if report.slack is None else scalar_to_json(report.slack),
        "slack_exact": report.slack_exact,
        "witness": subspace_to_json(report.witness),
        "primes": list(report.primes_used),
        "prime_log": {str(p): msg for p, msg in report.prime_log.items()},
        "certification": report.basis,
    }
    return out


def unitary_to_json(u, tol: float | None = None) -> dict:
    out = {
        "poset": u.poset.to_json(),
        "chi": {str(a): float(v) for a, v in u.chi.items()},
        "residual": u.residual,
        "projections": {str(a): float_matrix_to_json(P) for a, P in u.projections.items()},
        "certification": "float",
    }
    if u.metric is not None:
        out["metric"] = float_matrix_to_json(u.metric)
    if u.transform is not None:
        out["transform"] = float_matrix_to_json(u.transform)
    if tol is not None:
        out["tol"] = tol
    return out


def unitary_from_json(data):
    from .unitary import UnitaryRep, orthoscalar_residual

    poset = parse_poset(data["poset"])
    chi = {a: float(data["chi"][a]) for a in poset.elements}
    projs = {a: float_matrix_from_json(data["projections"][a]) for a in poset.elements}
    metric = float_matrix_from_json(data["metric"]) if "metric" in data else None
    transform = float_matrix_from_json(data["transform"]) if "transform" in data else None
    return UnitaryRep(poset, chi, projs, orthoscalar_residual(projs, chi), metric, transform)


def trace_to_json(trace) -> dict:
    return {
        "iterations": trace.iterations,
        "converged": trace.converged,
        "status": trace.status,
        "reason": trace.reason,
        "residual_history": [float(x) for x in trace.residual_history],
    }


def to_jsonable(obj):
    """Fallback encoder for ``json.dumps(default=...)``."""
    if isinstance(obj, (Fraction, GaussQ)):
        return scalar_to_json(obj)
    if isinstance(obj, np.ndarray):
        return float_matrix_to_json(obj) if obj.ndim == 2 else obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Subspace):
        return subspace_to_json(obj)
    if isinstance(obj, Poset):
        return obj.to_json()
    raise TypeError(f"cannot encode {type(obj).__name__}")
