"""The five critical posets, their one-parameter families and weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import Scalar, Subspace, as_scalar
from .poset import CRITICAL_NAMES, Poset, critical_poset, delete_element, normalize_name
from .representation import SubspaceRep
from .unitary import UnitarizationError, UnitaryRep, float_weight, orthoscalar_residual

__all__ = [
    "CRITICAL_NAMES",
    "FamilyInstance",
    "critical_poset",
    "family_rep",
    "remark5_weight",
    "deleted_rep",
    "lambda_element",
    "e",
    "extend_to_superposet",
]


def e(n: int, *indices: int, lam: Scalar = 0, lam_index: int | None = None) -> list:
    """``e_{i1...ik}`` in ``Q^n`` (1-based), optionally plus ``lam * e_{lam_index}``."""
    v = [Fraction(0)] * n
    for i in indices:
        v[i - 1] += 1
    if lam_index is not None:
        v[lam_index - 1] = v[lam_index - 1] + as_scalar(lam)
    return v


LAMBDA_ELEMENT = {
    "(1,1,1,1)": "d1",
    "(2,2,2)": "a2",
    "(1,3,3)": "b3",
    "(1,2,5)": "c5",
    "(N,4)": "n2",
}

AMBIENT_DIM = {"(1,1,1,1)": 2, "(2,2,2)": 3, "(1,3,3)": 4, "(1,2,5)": 6, "(N,4)": 5}


def _vectors(name: str, lam: Scalar) -> dict:
    n = AMBIENT_DIM[name]
    E = lambda *ix: e(n, *ix)  # noqa: E731
    if name == "(1,1,1,1)":
        return {"a1": [E(1)], "b1": [E(2)], "c1": [E(1, 2)], "d1": [e(n, 1, lam=lam, lam_index=2)]}
    if name == "(2,2,2)":
        return {
            "a1": [E(1, 2, 3)],
            "a2": [E(1, 2, 3), e(n, 1, lam=lam, lam_index=3)],
            "b1": [E(1)],
            "b2": [E(1), E(2)],
            "c1": [E(3)],
            "c2": [E(2), E(3)],
        }
    if name == "(1,3,3)":
        return {
            "a1": [E(1, 2, 3), E(2, 4)],
            "b1": [E(4)],
            "b2": [E(1), E(4)],
            "b3": [E(1), E(4), e(n, 2, lam=lam, lam_index=3)],
            "c1": [E(3)],
            "c2": [E(2), E(3)],
            "c3": [E(1), E(2), E(3)],
        }
    if name == "(1,2,5)":
        return {
            "a1": [E(1, 2, 3), E(2, 4, 5), E(1, 6)],
            "b1": [E(5), E(6)],
            "b2": [E(1), E(2), E(5), E(6)],
            "c1": [E(4)],
            "c2": [E(3), E(4)],
            "c3": [E(2), E(3), E(4)],
            "c4": [E(1), E(2), E(3), E(4)],
            "c5": [E(1), E(2), E(3), E(4), e(n, 5, lam=lam, lam_index=6)],
        }
    if name == "(N,4)":
        return {
            "n1": [E(2, 3, 5), E(1, 3, 4)],
            "n2": [E(2, 3, 5), E(1, 3, 4), E(5), e(n, 3, lam=lam, lam_index=4)],
            "n3": [E(5)],
            "n4": [E(1), E(2), E(5)],
            "c1": [E(4)],
            "c2": [E(3), E(4)],
            "c3": [E(2), E(3), E(4)],
            "c4": [E(1), E(2), E(3), E(4)],
        }
    raise KeyError(name)


@dataclass
class FamilyInstance:
    name: str
    lam: Scalar
    rep: SubspaceRep
    lambda_element: str


def family_rep(name: str, lam) -> FamilyInstance:
    """``V_lambda(S)`` for a critical poset ``S``, bases exactly as printed."""
    name = normalize_name(name)
    lam = as_scalar(lam)
    p = critical_poset(name)
    rep = SubspaceRep.from_vectors(p, AMBIENT_DIM[name], _vectors(name, lam))
    return FamilyInstance(name, lam, rep, LAMBDA_ELEMENT[name])


def lambda_element(name: str) -> str:
    return LAMBDA_ELEMENT[normalize_name(name)]


_CRITICAL_WEIGHTS = {
    "(1,1,1,1)": (Fraction(1, 2), (1, 1, 1, 1)),
    "(2,2,2)": (Fraction(1, 3), (1, 1, 1, 1, 1, 1)),
    "(1,3,3)": (Fraction(1, 4), (2, 1, 1, 1, 1, 1, 1)),
    "(1,2,5)": (Fraction(1, 6), (3, 2, 2, 1, 1, 1, 1, 1)),
    "(N,4)": (Fraction(1, 5), (2, 1, 1, 2, 1, 1, 1, 1)),
}


def remark5_weight(name: str) -> dict:
    """The imaginary-root weight, aligned with the canonical element order."""
    name = normalize_name(name)
    scale, tup = _CRITICAL_WEIGHTS[name]
    return dict(zip(critical_poset(name).elements, (scale * t for t in tup)))


def deleted_poset(name: str) -> Poset:
    name = normalize_name(name)
    return delete_element(critical_poset(name), LAMBDA_ELEMENT[name])


def deleted_rep(name: str) -> SubspaceRep:
    """``V(S_a)``: the family with its lambda-dependent subspace removed."""
    inst = family_rep(name, 2)
    p = deleted_poset(name)
    return SubspaceRep(p, inst.rep.ambient_dim, {a: inst.rep.spaces[a] for a in p.elements})


def extend_subspace_rep(host: Poset, embedding: dict, rep: SubspaceRep) -> SubspaceRep:
    """Push a representation of an embedded critical poset up to ``host``.

    Elements of the image keep their subspace, elements strictly above some
    image element (and outside it) get the whole space, everything else 0.
    """
    n = rep.ambient_dim
    image = {embedding[a]: a for a in rep.poset.elements}
    upper = upper_set(host, embedding)
    spaces = {}
    for x in host.elements:
        if x in image:
            spaces[x] = rep.spaces[image[x]]
        elif x in upper:
            spaces[x] = Subspace.full(n)
        else:
            spaces[x] = Subspace.zero(n)
    return SubspaceRep(host, n, spaces)


def upper_set(host: Poset, embedding: dict) -> list:
    """Elements outside the image lying strictly above some image element."""
    image = set(embedding.values())
    return [x for x in host.elements if x not in image and any(host.lt(b, x) for b in image)]


def with_top(p: Poset, top: str = "top") -> Poset:
    """``p`` with one new element above everything."""
    return Poset.from_relations(p.elements + (top,), [(a, top) for a in p.elements] + list(p.less))


def is_full_embedding(small: Poset, host: Poset, embedding: dict) -> bool:
    image = [embedding.get(a) for a in small.elements]
    if len(set(image)) != len(image) or any(x not in host.elements for x in image):
        return False
    return all(small.lt(a, b) == host.lt(embedding[a], embedding[b]) for a in small.elements for b in small.elements)


def extend_to_superposet(host: Poset, embedding: dict, u: UnitaryRep, chi_c, tol: float = 1e-8):
    """Push a chi-representation of an embedded critical poset up to ``host``.

    Elements above the image (and outside it) get the whole space, the image
    keeps its projections, the rest get 0.  The new weight divides the old by
    ``1 + k`` (``k`` = size of the upper set) and gives ``1/(1 + k)`` to every
    element outside the image, so ``sum chi' P' = 1`` is inherited.
    """
    if not is_full_embedding(u.poset, host, embedding):
        raise UnitarizationError("embedding is not a full subposet embedding")
    chi_c = float_weight(chi_c, u.poset)
    if u.residual > tol:
        raise UnitarizationError(f"input residual {u.residual:.2e} exceeds {tol:.0e}")
    n = u.dim
    upper = upper_set(host, embedding)
    k = len(upper)
    inv = {embedding[a]: a for a in u.poset.elements}
    projs, chi = {}, {}
    for x in host.elements:
        if x in inv:
            projs[x] = u.projections[inv[x]]
            chi[x] = chi_c[inv[x]] / (1 + k)
        else:
            projs[x] = np.eye(n, dtype=complex) if x in upper else np.zeros((n, n), dtype=complex)
            chi[x] = 1.0 / (1 + k)
    out = UnitaryRep(host, chi, projs, orthoscalar_residual(projs, chi), u.metric, u.transform)
    if out.invariant_errors()["containment"] > tol:
        raise UnitarizationError("containment violated after extension")
    return out, chi


def exact_superposet_weight(host: Poset, embedding: dict, chi_c: dict) -> dict:
    k = len(upper_set(host, embedding))
    inv = {embedding[a]: a for a in chi_c}
    return {x: (Fraction(chi_c[inv[x]]) if x in inv else Fraction(1)) / (1 + k) for x in host.elements}
