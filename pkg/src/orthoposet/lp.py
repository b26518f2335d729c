"""Dense two-phase simplex over the rationals (Bland's rule).

Small exact LPs only: maximize ``c.x`` subject to ``A_ub x <= b_ub``,
``A_eq x = b_eq`` and ``x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


@dataclass
class LPResult:
    x: list
    value: Fraction


def _pivot(tab: list, basis: list, row: int, col: int) -> None:
    piv = tab[row][col]
    if piv != 1:
        tab[row] = [v / piv for v in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row:
            f = r[col]
            if f:
                tab[i] = [a - f * b if b else a for a, b in zip(r, prow)]
    basis[row] = col


def _run(tab: list, basis: list, obj: list, allowed: int) -> None:
    """Maximise ``obj`` (a tableau row of reduced costs, last entry = value) in place."""
    while True:
        col = next((j for j in range(allowed) if obj[0][j] < 0), None)
        if col is None:
            return
        best, row = None, None
        for i, r in enumerate(tab):
            if r[col] > 0:
                ratio = r[-1] / r[col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            raise Unbounded
        _pivot_with_obj(tab, basis, obj, row, col)


def _pivot_with_obj(tab, basis, obj, row, col):
    _pivot(tab, basis, row, col)
    prow = tab[row]
    for k in range(len(obj)):
        f = obj[k][col]
        if f:
            obj[k] = [a - f * b if b else a for a, b in zip(obj[k], prow)]


def maximize(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    nv = len(c)
    rows = []
    # normalise to nonnegative right-hand sides; slack +1 for <=, surplus handled via artificials
    slack_cols = []
    for coeffs, rhs in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in coeffs], Fraction(rhs), "ub"))
    for coeffs, rhs in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in coeffs], Fraction(rhs), "eq"))
    n_slack = sum(1 for r in rows if r[2] == "ub")
    n_art = len(rows)
    width = nv + n_slack + n_art
    tab, basis = [], []
    s = 0
    for i, (coeffs, rhs, kind) in enumerate(rows):
        line = coeffs + [Fraction(0)] * (n_slack + n_art) + [rhs]
        if kind == "ub":
            line[nv + s] = Fraction(1)
            slack_cols.append(nv + s)
            s += 1
        if rhs < 0:
            line = [-v for v in line]
        line[nv + n_slack + i] = Fraction(1)
        tab.append(line)
        basis.append(nv + n_slack + i)
    # phase 1: maximise -sum(artificials)
    phase1 = [Fraction(0)] * (width + 1)
    for j in range(nv + n_slack, width):
        phase1[j] = Fraction(1)
    for r in tab:
        phase1 = [a - b for a, b in zip(phase1, r)]
    obj2 = [-Fraction(v) for v in c] + [Fraction(0)] * (n_slack + n_art + 1)
    objs = [phase1, obj2]
    _run(tab, basis, objs, width)
    if objs[0][-1] != 0:
        raise Infeasible
    # drive artificials out of the basis where possible
    for i, b in enumerate(list(basis)):
        if b >= nv + n_slack:
            col = next((j for j in range(nv + n_slack) if tab[i][j] != 0), None)
            if col is not None:
                _pivot_with_obj(tab, basis, objs, i, col)
    keep = [i for i, b in enumerate(basis) if b < nv + n_slack]
    tab = [[v for j, v in enumerate(tab[i]) if j < nv + n_slack or j == width] for i in keep]
    basis = [basis[i] for i in keep]
    obj = [[v for j, v in enumerate(objs[1]) if j < nv + n_slack or j == width]]
    _run(tab, basis, obj, nv + n_slack)
    x = [Fraction(0)] * nv
    for i, b in enumerate(basis):
        if b < nv:
            x[b] = tab[i][-1]
    return LPResult(x, sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0)))
