from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoposet.exact import (
    BadPrime,
    DimensionMismatch,
    GaussQ,
    Subspace,
    apply_map,
    contains,
    det,
    format_scalar,
    fp_intersection_dim,
    gauss,
    inverse_matrix,
    matmul,
    nullspace,
    parse_scalar,
    rank,
    rank_mod_p,
    reduce_mod_p,
    rref,
    scalar_mod_p,
    sqrt_minus_one,
    subspace_intersection,
    subspace_sum,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small.map(Fraction), min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def subspaces(n):
    return st.lists(st.lists(small.map(Fraction), min_size=n, max_size=n), max_size=n).map(
        lambda rows: Subspace.span(rows, n)
    )


def test_scalar_roundtrip():
    for text in ["3/4", "-2", "0", "1/2+3/5*i", "-1-1*i", "i", "-3*i"]:
        x = parse_scalar(text)
        assert parse_scalar(format_scalar(x)) == x
    assert parse_scalar("2+0*i") == 2 and isinstance(parse_scalar("2+0*i"), Fraction)


@pytest.mark.parametrize("bad", ["", "1/0x", "3i", "a", "1//2"])
def test_scalar_rejects_garbage(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_scalar(bad)


def test_gaussian_arithmetic_matches_sympy():
    a, b = gauss(Fraction(1, 2), 3), gauss(-2, Fraction(1, 3))
    sa = sympy.Rational(1, 2) + 3 * sympy.I
    sb = -2 + sympy.Rational(1, 3) * sympy.I
    for ours, theirs in [(a * b, sa * sb), (a / b, sa / sb), (a - b, sa - sb)]:
        theirs = sympy.nsimplify(sympy.expand(theirs))
        assert ours == gauss(Fraction(str(sympy.re(theirs))), Fraction(str(sympy.im(theirs))))
    assert isinstance(gauss(1, 0), Fraction)
    assert isinstance(a * a.conjugate(), Fraction)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_sympy(m):
    red, pivots, rk = rref(m)
    s_red, s_piv = sympy.Matrix(m).rref()
    assert rk == len(s_piv) and tuple(pivots) == s_piv
    for i in range(rk):
        assert [Fraction(str(x)) for x in s_red.row(i)] == red[i]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_dimension(m):
    ncols = len(m[0])
    ker = nullspace(m, ncols)
    assert len(ker) == ncols - rank(m)
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small.map(Fraction), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_inverse(m):
    d = det(m)
    assert d == Fraction(str(sympy.Matrix(m).det()))
    if d != 0:
        n = len(m)
        assert matmul(m, inverse_matrix(m)) == [[Fraction(i == j) for j in range(n)] for i in range(n)]
    else:
        with pytest.raises(ZeroDivisionError):
            inverse_matrix(m)


def test_subspace_is_canonical():
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    b = Subspace.span([[1, 2, 1], [1, 0, -1], [2, 2, 0]], 3)
    assert a == b and hash(a) == hash(b)


def test_subspace_examples():
    e1 = Subspace.coordinate(2, [1])
    e2 = Subspace.coordinate(2, [2])
    diag = Subspace.span([[1, 1]], 2)
    assert (e1 & e2).dim == 0 and (e1 + e2) == Subspace.full(2)
    assert (e1 + diag).dim == 2
    assert contains(Subspace.full(2), diag) and not contains(e1, diag)
    assert e1 <= e1 + e2
    with pytest.raises(DimensionMismatch):
        subspace_sum(e1, Subspace.full(3))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_modularity(pair):
    a, b = pair
    s, i = subspace_sum(a, b), subspace_intersection(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert contains(a, i) and contains(b, i) and contains(s, a) and contains(s, b)


def test_apply_map_and_complex_subspaces():
    i = gauss(0, 1)
    s = Subspace.span([[1, i]], 2)
    assert not s.is_real()
    assert s.contains_vector([i, -1])
    swap = [[0, 1], [1, 0]]
    assert apply_map(swap, s) == Subspace.span([[i, 1]], 2)


def test_mod_p_reduction():
    assert sqrt_minus_one(5) in (2, 3)
    assert sqrt_minus_one(7) is None
    assert scalar_mod_p(Fraction(1, 2), 7) == 4
    with pytest.raises(BadPrime):
        scalar_mod_p(Fraction(1, 7), 7)
    with pytest.raises(BadPrime):
        scalar_mod_p(gauss(0, 1), 7)
    assert scalar_mod_p(gauss(0, 1), 5) ** 2 % 5 == 4
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))), st.sampled_from([3, 5, 101]))
def test_reduction_can_only_grow_intersections(pair, p):
    a, b = pair
    try:
        fa, fb = reduce_mod_p(a, p), reduce_mod_p(b, p)
    except BadPrime:
        return
    if fa.dim == a.dim and fb.dim == b.dim:
        assert fp_intersection_dim(fa, fb) >= subspace_intersection(a, b).dim


def test_gauss_type_is_hashable_and_equal_to_fraction():
    assert GaussQ(Fraction(1), Fraction(0)) == 1
    assert len({gauss(1, 2), gauss(1, 2)}) == 1
