"""Exhaustive enumeration of subspaces of F_p^n.

Subspaces are walked Schubert cell by Schubert cell: for each pivot set the
free RREF entries run through an odometer.  For every element ``i`` the
product ``A_i M^T`` (``A_i`` annihilates ``V_i``) is updated incrementally,
one column per odometer step, and ``dim(V_i & M) = m - rank(A_i M^T)``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for j in range(k):
        num *= q ** (n - j) - 1
        den *= q ** (j + 1) - 1
    return num // den


def subspace_count(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def threads() -> int:
    return max(1, int(os.environ.get("ORTHOPOSET_THREADS", "1")))


@njit(cache=True, nogil=True)
def _cell_scan(n, pivots, free_row, free_col, p, ann, ann_rows, elem_chain, elem_bound, weights, mode):
    """Walk one Schubert cell.

    ``ann[c]`` stacks annihilator rows for chain ``c`` (top element first),
    so ``Ann(V_i)`` is the first ``elem_bound[i]`` rows of its chain.
    mode 0: return the set of realised subdimension codes.
    mode 1: return (min weighted margin, odometer state of first minimiser),
    the margin being ``m * weights[-1] - sum_i weights[i] * k_i``.
    """
    nc = ann.shape[0]
    t = elem_chain.shape[0]
    m = pivots.shape[0]
    mm = max(m, 1)
    nf = free_row.shape[0]
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = 1
        for _ in range(p - 2):
            inv[a] = inv[a] * a % p
    cmat = np.zeros((nc, n, mm), dtype=np.int64)
    for c in range(nc):
        for r in range(ann_rows[c]):
            for j in range(m):
                cmat[c, r, j] = ann[c, r, pivots[j]]
    ech = np.zeros((mm, mm), dtype=np.int64)
    ech_piv = np.zeros(mm, dtype=np.int64)
    v = np.zeros(mm, dtype=np.int64)
    prefix = np.zeros((nc, n + 1), dtype=np.int64)
    x = np.zeros(max(nf, 1), dtype=np.int64)
    best_x = np.zeros(max(nf, 1), dtype=np.int64)
    best = np.int64(1) << 62
    codes = set()
    codes.add(np.int64(-1))
    total = np.int64(1)
    for _ in range(nf):
        total *= p
    base = n + 1
    for _step in range(total):
        # rank of every prefix of every chain's row block
        for c in range(nc):
            rk = 0
            prefix[c, 0] = 0
            for r in range(ann_rows[c]):
                if rk < m:
                    for j in range(m):
                        v[j] = cmat[c, r, j]
                    for e in range(rk):
                        g = v[ech_piv[e]]
                        if g != 0:
                            for j in range(m):
                                v[j] = (v[j] - g * ech[e, j]) % p
                    lead = -1
                    for j in range(m):
                        if v[j] != 0:
                            lead = j
                            break
                    if lead >= 0:
                        f = inv[v[lead]]
                        for j in range(m):
                            ech[rk, j] = v[j] * f % p
                        ech_piv[rk] = lead
                        rk += 1
                prefix[c, r + 1] = rk
        code = np.int64(m)
        mult = np.int64(base)
        margin = np.int64(m) * weights[t]
        for i in range(t):
            k = m - prefix[elem_chain[i], elem_bound[i]]
            code += k * mult
            mult *= base
            margin -= weights[i] * k
        if mode == 0:
            codes.add(code)
        elif margin < best:
            best = margin
            for f in range(nf):
                best_x[f] = x[f]
        # odometer; each increment adds one annihilator column to one C column
        f = nf - 1
        while f >= 0:
            x[f] += 1
            col = free_col[f]
            row = free_row[f]
            for c in range(nc):
                for r in range(ann_rows[c]):
                    s = cmat[c, r, row] + ann[c, r, col]
                    cmat[c, r, row] = s - p if s >= p else s
            if x[f] == p:
                x[f] = 0
                f -= 1
            else:
                break
    out = np.empty(len(codes) - 1, dtype=np.int64)
    j = 0
    for c in codes:
        if c >= 0:
            out[j] = c
            j += 1
    return out, best, best_x


def _cell_layout(n: int, pivots: tuple) -> tuple[np.ndarray, np.ndarray]:
    pset = set(pivots)
    rows, cols = [], []
    for j, c in enumerate(pivots):
        for col in range(c + 1, n):
            if col not in pset:
                rows.append(j)
                cols.append(col)
    return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)


def cell_basis(n: int, pivots: tuple, x, p: int) -> list[list[int]]:
    rows, cols = _cell_layout(n, pivots)
    basis = [[0] * n for _ in pivots]
    for j, c in enumerate(pivots):
        basis[j][c] = 1
    for f, (r, c) in enumerate(zip(rows, cols)):
        basis[r][c] = int(x[f]) % p
    return basis


def chain_partition(poset, elements) -> list[list]:
    """Greedy partition of ``elements`` into chains, each listed top first."""
    left = list(elements)
    chains = []
    while left:
        # longest chain among the remaining elements, by DP over the order
        best: dict = {}
        for a in sorted(left, key=lambda z: len(poset.below(z))):
            prev = [best[b] for b in left if b in best and poset.lt(b, a)]
            best[a] = max(prev, key=len, default=[]) + [a]
        top = max(left, key=lambda z: (len(best[z]), -left.index(z)))
        ch = list(reversed(best[top]))
        chains.append(ch)
        left = [a for a in left if a not in ch]
    return chains


def pack_annihilators(poset, spaces: dict, n: int, p: int):
    """Chain-adapted annihilator blocks for the kernel."""
    from .exact import fp_annihilator, rank_mod_p

    elements = list(poset.elements)
    chains = chain_partition(poset, elements)
    nc = max(len(chains), 1)
    ann = np.zeros((nc, n, n), dtype=np.int64)
    ann_rows = np.zeros(nc, dtype=np.int64)
    elem_chain = np.zeros(len(elements), dtype=np.int64)
    elem_bound = np.zeros(len(elements), dtype=np.int64)
    for c, ch in enumerate(chains):
        rows: list = []
        for a in ch:
            for row in fp_annihilator(spaces[a]) if spaces[a].dim < n else []:
                if rank_mod_p(rows + [row], p) > len(rows):
                    rows.append(row)
            i = elements.index(a)
            elem_chain[i] = c
            elem_bound[i] = len(rows)
            if len(rows) != n - spaces[a].dim:
                raise ValueError(f"subspaces along a chain are not nested modulo {p}")
        ann_rows[c] = len(rows)
        for r, row in enumerate(rows):
            ann[c, r] = row
    return ann, ann_rows, elem_chain, elem_bound


def decode(code: int, n: int, t: int) -> tuple[int, tuple]:
    base = n + 1
    m = code % base
    code //= base
    ks = []
    for _ in range(t):
        ks.append(code % base)
        code //= base
    return m, tuple(ks)


def cells(n: int, dims=None):
    for m in range(n + 1) if dims is None else dims:
        yield from itertools.combinations(range(n), m)


def _scan_cells(pivot_sets, n, p, packed, weights, mode):
    """Run the kernel on every cell; results come back in ``pivot_sets`` order."""

    def one(piv):
        rows, cols = _cell_layout(n, piv)
        return _cell_scan(n, np.array(piv, dtype=np.int64), rows, cols, p, *packed, weights, mode)

    pivot_sets = list(pivot_sets)
    workers = min(threads(), len(pivot_sets))
    if workers <= 1:
        return [one(piv) for piv in pivot_sets]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(one, pivot_sets))


def realised_codes(poset, spaces: dict, n: int, p: int) -> set[int]:
    """Codes of every realised subdimension vector ``(m; k_i)``."""
    packed = pack_annihilators(poset, spaces, n, p)
    weights = np.zeros(len(poset) + 1, dtype=np.int64)
    out: set[int] = set()
    for codes, _, _ in _scan_cells(cells(n), n, p, packed, weights, 0):
        out.update(int(c) for c in codes)
    return out


def min_margin(poset, spaces: dict, n: int, p: int, weights: list[int], scale: int):
    """Minimum of ``scale*m - sum w_i k_i`` over proper nonzero subspaces, and a minimiser basis."""
    packed = pack_annihilators(poset, spaces, n, p)
    w = np.array(list(weights) + [scale], dtype=np.int64)
    pivot_sets = list(cells(n, range(1, n)))
    best, best_basis = None, None
    for piv, (_, val, x) in zip(pivot_sets, _scan_cells(pivot_sets, n, p, packed, w, 1)):
        if best is None or val < best:
            best, best_basis = int(val), cell_basis(n, piv, x, p)
    return best, best_basis
