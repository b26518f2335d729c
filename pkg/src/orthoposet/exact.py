"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are :class:`fractions.Fraction` when real and :class:`GaussQ` when
they carry an imaginary part; the two interoperate, and every result with a
zero imaginary part collapses back to a ``Fraction``.  Real-only workloads
(the whole catalog) therefore run on plain fractions.

Matrices are lists of rows.  Subspaces are stored as their canonical reduced
row-echelon basis, so equality of subspaces is equality of bases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union


class GaussQ:
    """A Gaussian rational ``re + im*i`` with ``im != 0``.

    Use :func:`gauss` to build values; it returns a ``Fraction`` when the
    imaginary part vanishes.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = re
        self.im = im

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussQ):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        if isinstance(x, complex):
            return Fraction(x.real), Fraction(x.imag)
        raise TypeError(f"not an exact scalar: {x!r}")

    def __add__(self, other):
        a, b = self._parts(other)
        return gauss(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        return gauss(self.re - a, self.im - b)

    def __rsub__(self, other):
        a, b = self._parts(other)
        return gauss(a - self.re, b - self.im)

    def __mul__(self, other):
        a, b = self._parts(other)
        return gauss(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * inverse(other)

    def __rtruediv__(self, other):
        return inverse(self) * other

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __eq__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self.re == a and self.im == b

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, GaussQ]
Matrix = list  # list of rows of Scalar


def gauss(re, im=0) -> Scalar:
    re, im = Fraction(re), Fraction(im)
    if im == 0:
        return re
    return GaussQ(re, im)


def as_scalar(x) -> Scalar:
    if isinstance(x, (Fraction, GaussQ)):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, complex):
        return gauss(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


def inverse(x: Scalar) -> Scalar:
    if isinstance(x, GaussQ):
        d = x.re * x.re + x.im * x.im
        return GaussQ(x.re / d, -x.im / d)
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(x)


def conj(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, GaussQ) else x


def is_real(x: Scalar) -> bool:
    return not isinstance(x, GaussQ)


_NUMBER_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _rational(text: str, original: str) -> Fraction:
    if not _NUMBER_RE.match(text):
        raise ValueError(f"malformed scalar: {original!r}")
    return Fraction(text)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"a/b"``, ``"a/b+c/d*i"``, ``"i"``, ``"-3*i"`` and the like."""
    body = text.replace(" ", "")
    if not body.endswith("i"):
        return _rational(body, text)
    body = body[:-1]
    starred = body.endswith("*")
    if starred:
        body = body[:-1]
    cut = max(body.rfind("+"), body.rfind("-"), 0)
    real, imag = body[:cut], body[cut:]
    if imag.lstrip("+-") == "":
        if starred:
            raise ValueError(f"malformed scalar: {text!r}")
        imag += "1"
    elif not starred:
        # "3i" is ambiguous next to a real part; insist on "3*i"
        raise ValueError(f"malformed scalar: {text!r}")
    return gauss(_rational(real, text) if real else Fraction(0), _rational(imag, text))


def format_scalar(x: Scalar) -> str:
    if isinstance(x, GaussQ):
        sign = "+" if x.im >= 0 else "-"
        return f"{x.re}{sign}{abs(x.im)}*i"
    return str(Fraction(x))


def to_complex(x: Scalar) -> complex:
    if isinstance(x, GaussQ):
        return complex(x)
    return complex(float(x))


# ---------------------------------------------------------------- matrices


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[as_scalar(x) for x in row] for row in rows]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    ncols = len(b[0]) if b else 0
    bt = transpose(b) if b else [[] for _ in range(ncols)]
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def _dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    s = Fraction(0)
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def mat_vec(m: Matrix, v: Sequence[Scalar]) -> list:
    return [_dot(row, v) for row in m]


def conj_transpose(m: Matrix) -> Matrix:
    return [[conj(x) for x in col] for col in zip(*m)] if m else []


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Canonical reduced row-echelon form.

    Returns ``(R, pivots, rank)`` where ``R`` keeps only the nonzero rows.
    The input is not modified.
    """
    rows = [list(r) for r in m]
    if not rows:
        return [], [], 0
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = inverse(rows[r][c])
        if inv != 1:
            rows[r] = [x * inv if x else x for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots, r


def rank(m: Matrix) -> int:
    return rref(m)[2]


def nullspace(m: Matrix, ncols: int) -> Matrix:
    """Basis (as rows) of ``{x : m x = 0}`` in canonical form."""
    red, pivots, rk = rref(m) if m else ([], [], 0)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def inverse_matrix(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + ident_row for row, ident_row in zip(m, identity(n))]
    red, pivots, rk = rref(aug)
    if rk < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(m: Matrix) -> Scalar:
    n = len(m)
    rows = [list(r) for r in m]
    d: Scalar = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d = d * rows[c][c]
        inv = inverse(rows[c][c])
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


# ---------------------------------------------------------------- subspaces


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q(i)^n held as its canonical RREF basis."""

    ambient_dim: int
    basis: tuple

    @classmethod
    def span(cls, vectors: Iterable[Iterable], ambient_dim: int) -> "Subspace":
        rows = matrix(vectors)
        for row in rows:
            if len(row) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(row)} in dimension {ambient_dim}")
        red, _, _ = rref(rows)
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(tuple(r) for r in identity(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of standard basis vectors, 1-based indices."""
        vecs = []
        for k in indices:
            v = [0] * n
            v[k - 1] = 1
            vecs.append(v)
        return cls.span(vecs, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def rows(self) -> Matrix:
        return [list(r) for r in self.basis]

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x != 0) for r in self.basis]

    def annihilator(self) -> Matrix:
        """Rows ``a`` with ``a . v = 0`` for every ``v`` in the subspace (bilinear, no conjugation)."""
        if not self.basis:
            return identity(self.ambient_dim)
        return nullspace(self.rows(), self.ambient_dim)

    def contains_vector(self, v: Sequence) -> bool:
        v = [as_scalar(x) for x in v]
        return rank(self.rows() + [v]) == self.dim

    def is_real(self) -> bool:
        return all(is_real(x) for r in self.basis for x in r)

    def __le__(self, other: "Subspace") -> bool:
        return contains(other, self)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersection(self, other)

    def __repr__(self):
        rows = ", ".join("(" + ",".join(format_scalar(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, <{rows}>)"


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace.span(list(a.basis) + list(b.basis), a.ambient_dim)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of ``[A; -B]^T``: solutions ``x A = y B``."""
    _check_same(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n)
    # x A - y B = 0  <=>  [A^T | -B^T] (x, y) = 0
    stacked = [list(a_col) + [-x for x in b_col] for a_col, b_col in zip(zip(*a.basis), zip(*b.basis))]
    kern = nullspace(stacked, a.dim + b.dim)
    vecs = [mat_vec(transpose(a.rows()), k[: a.dim]) for k in kern]
    return Subspace.span(vecs, n)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _check_same(a, b)
    if b.dim == 0:
        return True
    if b.dim > a.dim:
        return False
    return rank(a.rows() + b.rows()) == a.dim


def apply_map(g: Matrix, s: Subspace) -> Subspace:
    """Image ``g(s)`` for a square ``g`` acting on column vectors."""
    n = len(g)
    vecs = [mat_vec(g, v) for v in s.basis]
    return Subspace.span(vecs, n)


# ---------------------------------------------------------------- mod p


class BadPrime(ValueError):
    """The prime clashes with a denominator or collapses the rank."""


def sqrt_minus_one(p: int) -> int | None:
    if p % 4 != 1:
        return None
    for a in range(2, p):
        r = pow(a, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    return None


def scalar_mod_p(x: Scalar, p: int) -> int:
    re_part, im_part = GaussQ._parts(x)
    out = 0
    for part, unit in ((re_part, 1), (im_part, None)):
        if part == 0:
            continue
        if part.denominator % p == 0:
            raise BadPrime(f"denominator {part.denominator} divisible by {p}")
        v = part.numerator * pow(part.denominator, -1, p) % p
        if unit is None:
            root = sqrt_minus_one(p)
            if root is None:
                raise BadPrime(f"i is not in F_{p} (p = 3 mod 4)")
            v = v * root % p
        out = (out + v) % p
    return out


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rref_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    rows = [[x % p for x in r] for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows[:r]


@dataclass(frozen=True)
class FpSubspace:
    """A subspace of F_p^n, canonical RREF basis with entries in ``range(p)``."""

    p: int
    ambient_dim: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def reduce_mod_p(s: Subspace, p: int) -> FpSubspace:
    """Reduce the canonical basis modulo ``p``.

    Because the basis is in RREF, its rows span the localisation of the
    subspace at ``p``; a good prime therefore keeps the dimension.
    """
    rows = [[scalar_mod_p(x, p) for x in r] for r in s.basis]
    red = rref_mod_p(rows, p)
    if len(red) != s.dim:
        raise BadPrime(f"rank drops from {s.dim} to {len(red)} modulo {p}")
    return FpSubspace(p, s.ambient_dim, tuple(tuple(r) for r in red))


def fp_intersection_dim(a: FpSubspace, b: FpSubspace) -> int:
    if a.dim == 0 or b.dim == 0:
        return 0
    return a.dim + b.dim - rank_mod_p([list(r) for r in a.basis + b.basis], a.p)


def fp_annihilator(s: FpSubspace) -> list[list[int]]:
    """Rows ``a`` with ``a . v = 0 (mod p)`` for all ``v`` in ``s``."""
    n, p = s.ambient_dim, s.p
    if s.dim == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = [next(j for j, x in enumerate(r) if x) for r in s.basis]
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(s.basis, pivots):
            v[pc] = (-row[f]) % p
        out.append(v)
    return out
