"""Subspace representations of posets: sums, matrix form, Hom spaces, equivalence."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exact import (
    Matrix,
    Subspace,
    apply_map,
    as_scalar,
    contains,
    det,
    identity,
    inverse_matrix,
    is_real,
    matmul,
    matrix,
    nullspace,
    rank,
    rref,
    subspace_sum,
    transpose,
)
from .poset import Poset


class RepresentationError(ValueError):
    pass


@dataclass
class SubspaceRep:
    """``(V; V_i)`` with ``V = Q(i)^n`` and one subspace per poset element."""

    poset: Poset
    ambient_dim: int
    spaces: dict

    def __post_init__(self):
        missing = [a for a in self.poset.elements if a not in self.spaces]
        if missing:
            raise RepresentationError(f"no subspace given for {missing}")
        for a, s in self.spaces.items():
            if s.ambient_dim != self.ambient_dim:
                raise RepresentationError(f"subspace {a!r} lives in dimension {s.ambient_dim}, not {self.ambient_dim}")

    @classmethod
    def from_vectors(cls, poset: Poset, n: int, vectors: Mapping) -> "SubspaceRep":
        return cls(poset, n, {a: Subspace.span(vectors.get(a, []), n) for a in poset.elements})

    def __getitem__(self, a) -> Subspace:
        return self.spaces[a]

    def dims(self) -> dict:
        return {a: self.spaces[a].dim for a in self.poset.elements}

    def is_real(self) -> bool:
        return all(s.is_real() for s in self.spaces.values())

    def field(self) -> str:
        return "Q" if self.is_real() else "Q(i)"

    def __eq__(self, other):
        if not isinstance(other, SubspaceRep):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.ambient_dim == other.ambient_dim
            and all(self.spaces[a] == other.spaces[a] for a in self.poset.elements)
        )


@dataclass
class MatrixRep:
    """Block matrix ``[A_1 | ... | A_t]``; ``blocks[a]`` is a list of rows (n x k_a)."""

    poset: Poset
    rows: int
    blocks: dict

    def columns(self, a) -> list:
        return transpose(self.blocks[a]) if self.blocks[a] and self.blocks[a][0] else []


@dataclass
class HomSpace:
    source: SubspaceRep
    target: SubspaceRep
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def _same_poset(v: SubspaceRep, w: SubspaceRep) -> None:
    if v.poset != w.poset:
        raise RepresentationError("representations of different posets")


def validate_rep(r: SubspaceRep) -> list[tuple]:
    """Every pair ``(i, j)`` with ``i < j`` but ``V_i`` not inside ``V_j``; empty means valid."""
    bad = []
    for a, b in sorted(r.poset.less, key=lambda ab: (r.poset.index(ab[0]), r.poset.index(ab[1]))):
        if not contains(r.spaces[b], r.spaces[a]):
            bad.append((a, b))
    return bad


def transform(r: SubspaceRep, g: Matrix) -> SubspaceRep:
    """The representation ``g . r`` for an invertible ``g``."""
    g = matrix(g)
    return SubspaceRep(r.poset, r.ambient_dim, {a: apply_map(g, s) for a, s in r.spaces.items()})


def direct_sum(a: SubspaceRep, b: SubspaceRep) -> SubspaceRep:
    _same_poset(a, b)
    n, m = a.ambient_dim, b.ambient_dim
    zero_n, zero_m = [Fraction(0)] * n, [Fraction(0)] * m
    spaces = {}
    for x in a.poset.elements:
        rows = [list(v) + zero_m for v in a.spaces[x].basis] + [zero_n + list(v) for v in b.spaces[x].basis]
        spaces[x] = Subspace.span(rows, n + m)
    return SubspaceRep(a.poset, n + m, spaces)


def zero_rep(p: Poset) -> SubspaceRep:
    return SubspaceRep(p, 0, {a: Subspace.zero(0) for a in p.elements})


def dim_vector(r: SubspaceRep) -> tuple[int, dict]:
    return r.ambient_dim, r.dims()


def to_matrix_rep(r: SubspaceRep) -> MatrixRep:
    """Blocks ``A_i`` spanning a complement of ``sum_{j<i} V_j`` inside ``V_i``.

    The complement is the greedy extension by the RREF rows of ``V_i``, so
    the columns of all ``A_j`` with ``j <= i`` span ``V_i``.
    """
    bad = validate_rep(r)
    if bad:
        raise RepresentationError(f"invalid representation, violations {bad}")
    n = r.ambient_dim
    blocks = {}
    for a in r.poset.elements:
        lower = Subspace.zero(n)
        for b in r.poset.below(a):
            lower = subspace_sum(lower, r.spaces[b])
        current = lower.rows()
        rk = lower.dim
        cols = []
        for v in r.spaces[a].basis:
            if rank(current + [list(v)]) > rk:
                current.append(list(v))
                rk += 1
                cols.append(list(v))
        blocks[a] = transpose(cols) if cols else [[] for _ in range(n)]
    return MatrixRep(r.poset, n, blocks)


def from_matrix_rep(mr: MatrixRep) -> SubspaceRep:
    spaces = {}
    for a in mr.poset.elements:
        vecs = []
        for b in [a] + mr.poset.below(a):
            vecs.extend(mr.columns(b))
        spaces[a] = Subspace.span(vecs, mr.rows)
    return SubspaceRep(mr.poset, mr.rows, spaces)


def hom_space(v: SubspaceRep, w: SubspaceRep) -> HomSpace:
    """Exact basis of ``{g : V -> W | g(V_i) in W_i for all i}``.

    ``g`` is ``dim W x dim V``; unknowns are its entries in row-major order and
    each constraint reads ``a^T g b = 0`` for ``a`` annihilating ``W_i`` and
    ``b`` in the basis of ``V_i``.
    """
    _same_poset(v, w)
    n, m = v.ambient_dim, w.ambient_dim
    eqs = []
    for x in v.poset.elements:
        vs, ws = v.spaces[x], w.spaces[x]
        if vs.dim == 0 or ws.dim == m:
            continue
        for a in ws.annihilator():
            for b in vs.basis:
                eqs.append([ar * bc if ar and bc else Fraction(0) for ar in a for bc in b])
    if n * m == 0:
        return HomSpace(v, w, [])
    if eqs:
        eqs, _, _ = rref(eqs)
    kern = nullspace(eqs, n * m)
    basis = [[list(k[r * n : (r + 1) * n]) for r in range(m)] for k in kern]
    return HomSpace(v, w, basis)


def end_dim(r: SubspaceRep) -> int:
    return hom_space(r, r).dim


def is_schurian(r: SubspaceRep) -> bool:
    if r.ambient_dim < 1:
        raise RepresentationError("schurian test needs a nonzero representation")
    return end_dim(r) == 1


def _combine(basis: list, coeffs) -> Matrix:
    rows, cols = len(basis[0]), len(basis[0][0])
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for c, h in zip(coeffs, basis):
        if c:
            for i in range(rows):
                hi, oi = h[i], out[i]
                for j in range(cols):
                    if hi[j]:
                        oi[j] = oi[j] + c * hi[j]
    return out


def intertwines(g: Matrix, v: SubspaceRep, w: SubspaceRep) -> bool:
    """``g(V_i) = W_i`` exactly for all elements."""
    return all(apply_map(g, v.spaces[a]) == w.spaces[a] for a in v.poset.elements)


GRID_LIMIT = 4


def are_equivalent(v: SubspaceRep, w: SubspaceRep, seed: int = 0, trials: int = 32) -> Matrix | None:
    """An invertible ``g`` with ``g(V_i) = W_i``, or ``None``.

    ``det`` restricted to the Hom space is a polynomial of degree ``n`` in
    each coordinate, so it vanishes identically iff it vanishes on the grid
    ``{0..n}^k``.  That grid is used for Hom spaces of dimension up to
    ``GRID_LIMIT``; above it, ``trials`` random integer points (seeded) are
    tried and a ``None`` is probabilistic.
    """
    _same_poset(v, w)
    if v.ambient_dim != w.ambient_dim or v.dims() != w.dims():
        return None
    n = v.ambient_dim
    if n == 0:
        return []
    hom = hom_space(v, w)
    k = hom.dim
    if k == 0:
        return None
    if k <= GRID_LIMIT:
        points = itertools.product(range(n + 1), repeat=k)
    else:
        rng = random.Random(seed)
        points = (tuple(rng.randint(-10**6, 10**6) for _ in range(k)) for _ in range(trials))
    for pt in points:
        if not any(pt):
            continue
        g = _combine(hom.basis, [Fraction(c) for c in pt])
        if det(g) != 0:
            # equal dimensions + injectivity turn inclusions into equalities
            assert intertwines(g, v, w)
            return g
    return None


# ------------------------------------------------------------ indecomposability


@dataclass
class Indecomposability:
    verdict: bool | None  # None means Unknown
    idempotent: Matrix | None = None
    field: str = "Q"


def _charpoly_factors(g: Matrix):
    import sympy

    def to_sym(x):
        x = as_scalar(x)
        if is_real(x):
            return sympy.Rational(x.numerator, x.denominator)
        return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)

    m = sympy.Matrix([[to_sym(x) for x in row] for row in g])
    t = sympy.Symbol("t")
    poly = m.charpoly(t)
    real = all(is_real(x) for row in g for x in row)
    _, factors = sympy.factor_list(poly.as_expr(), t, **({} if real else {"extension": sympy.I}))
    return t, [sympy.Poly(f, t) for f, _ in factors]


def _poly_at(coeffs: list, g: Matrix) -> Matrix:
    n = len(g)
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in coeffs:  # Horner, highest degree first
        out = matmul(out, g)
        if c:
            for i in range(n):
                out[i][i] = out[i][i] + c
    return out


def _from_sym(c):
    import sympy

    re_part, im_part = sympy.re(c), sympy.im(c)
    return as_scalar(Fraction(int(re_part.p), int(re_part.q))) + (
        0 if im_part == 0 else as_scalar(complex(0, 1)) * Fraction(int(im_part.p), int(im_part.q))
    )


def is_indecomposable(r: SubspaceRep, samples: int = 8, seed: int = 0) -> Indecomposability:
    """Three-valued indecomposability test.

    ``True`` for schurian representations; ``False`` with a nontrivial
    idempotent endomorphism when one is found as a Fitting projection of a
    sampled endomorphism; ``None`` (unknown) otherwise.
    """
    fld = r.field()
    if r.ambient_dim == 0:
        return Indecomposability(False, None, fld)
    end = hom_space(r, r)
    if end.dim == 1:
        return Indecomposability(True, None, fld)
    n = r.ambient_dim
    rng = random.Random(seed)
    for _ in range(samples):
        coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(end.dim)]
        g = _combine(end.basis, coeffs)
        t, factors = _charpoly_factors(g)
        if len(factors) < 2:
            continue
        f = factors[0]
        fg = _poly_at([_from_sym(c) for c in f.all_coeffs()], g)
        power = identity(n)
        for _ in range(n):
            power = matmul(power, fg)
        kernel = nullspace(power, n)  # generalised eigenspace of f
        image = rref(transpose(power))[0]  # column space of f(g)^n, as rows
        if 0 < len(kernel) < n:
            basis_cols = transpose(kernel + image)
            proj = [[Fraction(int(i == j and i < len(kernel))) for j in range(n)] for i in range(n)]
            e = matmul(matmul(basis_cols, proj), inverse_matrix(basis_cols))
            return Indecomposability(False, e, fld)
    return Indecomposability(None, None, fld)
