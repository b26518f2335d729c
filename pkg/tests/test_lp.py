from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from orthoposet.lp import Infeasible, Unbounded, maximize

coef = st.integers(-5, 5)


@st.composite
def bounded_lps(draw):
    nv = draw(st.integers(1, 4))
    m = draw(st.integers(1, 5))
    c = draw(st.lists(coef, min_size=nv, max_size=nv))
    a = [draw(st.lists(coef, min_size=nv, max_size=nv)) for _ in range(m)]
    b = [draw(st.integers(-3, 10)) for _ in range(m)]
    # a box keeps every instance bounded
    for i in range(nv):
        row = [0] * nv
        row[i] = 1
        a.append(row)
        b.append(draw(st.integers(0, 6)))
    eq = draw(st.booleans())
    a_eq = [draw(st.lists(st.integers(0, 3), min_size=nv, max_size=nv))] if eq else []
    b_eq = [draw(st.integers(0, 6))] if eq else []
    return c, a, b, a_eq, b_eq


@settings(max_examples=150, deadline=None)
@given(bounded_lps())
def test_matches_scipy(lp):
    c, a, b, a_eq, b_eq = lp
    ref = linprog([-x for x in c], A_ub=a, b_ub=b, A_eq=a_eq or None, b_eq=b_eq or None, method="highs")
    if ref.status == 2:
        with pytest.raises(Infeasible):
            maximize(c, a, b, a_eq, b_eq)
        return
    assert ref.status == 0
    res = maximize(c, a, b, a_eq, b_eq)
    assert float(res.value) == pytest.approx(-ref.fun, abs=1e-7)
    x = np.array([float(v) for v in res.x])
    assert all(v >= 0 for v in res.x)
    assert np.all(np.array(a) @ x <= np.array(b) + 1e-12)
    for row, rhs in zip(a_eq, b_eq):
        assert sum(Fraction(r) * v for r, v in zip(row, res.x)) == rhs


def test_exact_optimum():
    # max x + y, x + 2y <= 4, 3x + y <= 6  ->  (8/5, 6/5)
    res = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.x == [Fraction(8, 5), Fraction(6, 5)] and res.value == Fraction(14, 5)


def test_unbounded_and_infeasible():
    with pytest.raises(Unbounded):
        maximize([1, 0], [[0, 1]], [1])
    with pytest.raises(Infeasible):
        maximize([1], [[1]], [-1])
