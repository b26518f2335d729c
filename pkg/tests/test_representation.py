import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoposet.catalog import CRITICAL_NAMES, deleted_rep, family_rep
from orthoposet.exact import Subspace, det, gauss, matmul
from orthoposet.poset import antichain, chain, parse_poset
from orthoposet.representation import (
    RepresentationError,
    SubspaceRep,
    are_equivalent,
    direct_sum,
    end_dim,
    from_matrix_rep,
    hom_space,
    intertwines,
    is_indecomposable,
    is_schurian,
    to_matrix_rep,
    transform,
    validate_rep,
)


def lines(*vectors):
    p = antichain([f"l{i}" for i in range(len(vectors))])
    return SubspaceRep.from_vectors(p, 2, {f"l{i}": [v] for i, v in enumerate(vectors)})


def random_invertible(n, rng):
    while True:
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if det(g) != 0:
            return g


def hom_oracle_dim(v: SubspaceRep, w: SubspaceRep) -> int:
    """Dimension of the Hom space by brute sympy linear algebra on symbolic entries."""
    n, m = v.ambient_dim, w.ambient_dim
    syms = sympy.symbols(f"g0:{n * m}")
    g = sympy.Matrix(m, n, syms)
    eqs = []
    for a in v.poset.elements:
        wb = sympy.Matrix([list(r) for r in w.spaces[a].basis]) if w.spaces[a].dim else sympy.zeros(0, m)
        for b in v.spaces[a].basis:
            img = g * sympy.Matrix([sympy.nsimplify(str(x)) for x in b])
            # img lies in W_a iff every annihilator of W_a kills it
            if wb.rows == 0:
                eqs.extend(list(img))
            else:
                ann = wb.nullspace()
                eqs.extend((a_.T * img)[0] for a_ in ann)
    if not eqs:
        return n * m
    mat, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return n * m - mat.rank()


def test_validate_reports_violations():
    p = parse_poset("a<b")
    bad = SubspaceRep.from_vectors(p, 2, {"a": [[1, 0]], "b": [[0, 1]]})
    assert validate_rep(bad) == [("a", "b")]
    with pytest.raises(RepresentationError):
        to_matrix_rep(bad)


def test_three_lines_schurian_two_equal_lines_not():
    three = lines([1, 0], [0, 1], [1, 1])
    assert end_dim(three) == 1 and is_schurian(three)
    two_equal = lines([1, 0], [1, 0])
    assert end_dim(two_equal) == 3  # maps fixing one line: upper triangular


@pytest.mark.parametrize("name", CRITICAL_NAMES)
def test_hom_dimension_matches_sympy(name):
    r = family_rep(name, 3).rep
    w = family_rep(name, 5).rep
    assert hom_space(r, r).dim == hom_oracle_dim(r, r) == 1
    assert hom_space(r, w).dim == hom_oracle_dim(r, w)


@pytest.mark.parametrize("name", CRITICAL_NAMES)
def test_deleted_reps_are_schurian(name):
    assert is_schurian(deleted_rep(name))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CRITICAL_NAMES), st.integers(0, 10_000))
def test_conjugates_are_equivalent(name, seed):
    r = family_rep(name, 2).rep
    g = random_invertible(r.ambient_dim, random.Random(seed))
    w = transform(r, g)
    h = are_equivalent(r, w)
    assert h is not None and intertwines(h, r, w) and det(h) != 0


def test_non_equivalent_lambdas():
    assert are_equivalent(family_rep("(2,2,2)", 2).rep, family_rep("(2,2,2)", 3).rep) is None
    assert are_equivalent(lines([1, 0], [0, 1], [1, 1], [1, 2]), lines([1, 0], [0, 1], [1, 1], [1, 3])) is None


def test_random_fallback_above_grid_limit():
    # no constraints at all: Hom is every 3x3 matrix, beyond the exhaustive grid
    p = antichain(["a"])
    v = SubspaceRep.from_vectors(p, 3, {"a": []})
    w = SubspaceRep.from_vectors(p, 3, {"a": []})
    assert hom_space(v, w).dim == 9
    g = are_equivalent(v, w, seed=7)
    assert g is not None and det(g) != 0


def test_matrix_rep_roundtrip():
    for name in CRITICAL_NAMES:
        r = family_rep(name, Fraction(1, 2)).rep
        mr = to_matrix_rep(r)
        assert from_matrix_rep(mr) == r
        assert sum(len(mr.columns(a)) for a in r.poset.elements) <= sum(r.dims().values())


def test_direct_sum_is_decomposable():
    r = lines([1, 0], [0, 1], [1, 1])
    s = direct_sum(r, r)
    assert end_dim(s) == 4
    verdict = is_indecomposable(s)
    assert verdict.verdict is False
    e = verdict.idempotent
    assert matmul(e, e) == e
    assert is_indecomposable(r).verdict is True


def test_gaussian_family_member():
    i = gauss(0, 1)
    r = family_rep("(1,1,1,1)", i).rep
    assert r.field() == "Q(i)"
    assert end_dim(r) == 1
    assert are_equivalent(r, family_rep("(1,1,1,1)", 2).rep) is None


def test_flag_endomorphisms_are_upper_triangular():
    p = chain(["a", "b"])
    flag = SubspaceRep.from_vectors(p, 2, {"a": [[1, 0]], "b": [[1, 0], [0, 1]]})
    assert end_dim(flag) == 3  # upper-triangular matrices
    assert Subspace.full(2) == flag.spaces["b"]
