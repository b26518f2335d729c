"""chi-stability: certificates, subdimension vectors, and weight synthesis.

A representation is certified stable by exhaustive enumeration of the
subspaces of ``F_p^n``.  Reduction modulo a good prime can only enlarge
intersection dimensions, so the strict inequality over ``F_p`` implies it for
every subspace defined over ``Q`` (and, by Galois descent of the maximal
destabilising subspace, over ``Q(i)``).  Destabilising witnesses are lifted
to exact subspaces and re-checked over ``Q(i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import (
    BadPrime,
    Subspace,
    contains,
    reduce_mod_p,
    subspace_intersection,
    subspace_sum,
)
from .fpenum import decode, min_margin, realised_codes, subspace_count
from .lp import Infeasible, maximize
from .poset import Poset
from .representation import RepresentationError, SubspaceRep, validate_rep

DEFAULT_PRIMES = (101, 103, 107)
FALLBACK_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
DEFAULT_CAP = 70_000_000  # subspaces of F_p^n walked per prime
MAX_AMBIENT = 6

STABLE = "Stable"
UNSTABLE = "Unstable"
NOT_NORMALIZED = "NotNormalized"
UNVERIFIED_UNSTABLE = "Unverified-Unstable"


class StabilityError(ValueError):
    pass


class PrimesExhausted(StabilityError):
    pass


class NotStable(StabilityError):
    pass


def as_weight(chi, poset: Poset) -> dict:
    if not isinstance(chi, dict):
        chi = dict(zip(poset.elements, chi))
    out = {}
    for a in poset.elements:
        if a not in chi:
            raise StabilityError(f"weight has no value for {a!r}")
        v = Fraction(chi[a])
        if v <= 0:
            raise StabilityError(f"weight must be positive, got {v} at {a!r}")
        out[a] = v
    return out


def _common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


def check_normalization(r: SubspaceRep, chi) -> bool:
    chi = as_weight(chi, r.poset)
    return sum((chi[a] * r.spaces[a].dim for a in r.poset.elements), Fraction(0)) == r.ambient_dim


@dataclass(frozen=True)
class SubdimVector:
    m: int
    ks: tuple  # dim(V_i & M) in poset element order

    def intersections(self, poset: Poset) -> dict:
        return dict(zip(poset.elements, self.ks))

    def margin(self, poset: Poset, chi: dict) -> Fraction:
        return self.m - sum((chi[a] * k for a, k in zip(poset.elements, self.ks)), Fraction(0))


def _check_cost(n: int, p: int, cap: int) -> None:
    if n > MAX_AMBIENT:
        raise StabilityError(f"ambient dimension {n} exceeds the enumeration cap {MAX_AMBIENT}")
    if subspace_count(n, p) > cap:
        raise StabilityError(f"{subspace_count(n, p)} subspaces of F_{p}^{n} exceed the cost cap {cap}")


def _reduce_all(r: SubspaceRep, p: int) -> dict:
    return {a: reduce_mod_p(r.spaces[a], p) for a in r.poset.elements}


def enumerate_subdim_vectors(r: SubspaceRep, p: int, cap: int = DEFAULT_CAP) -> set:
    """Every realised ``(dim M; dim(V_i & M))`` over ``F_p``, all ``M`` including 0 and V."""
    n = r.ambient_dim
    _check_cost(n, p, cap)
    spaces = _reduce_all(r, p)
    t = len(r.poset)
    return {SubdimVector(*decode(c, n, t)) for c in realised_codes(r.poset, spaces, n, p)}


def candidate_primes(n: int, primes: Sequence[int] | None = None, cap: int = DEFAULT_CAP) -> list[int]:
    """Primes to try, in order, restricted to those with affordable enumeration.

    An explicit list is used as given; the default list is followed by small
    fallback primes for ambient dimensions where 101 is too costly.
    """
    pool = list(primes) if primes else list(DEFAULT_PRIMES) + list(FALLBACK_PRIMES)
    return [q for q in pool if subspace_count(n, q) <= cap]


# ------------------------------------------------------------ exact margins


def margin(r: SubspaceRep, chi: dict, m: Subspace) -> Fraction:
    """``dim M - sum chi_i dim(V_i & M)``, exactly."""
    return m.dim - sum(
        (chi[a] * subspace_intersection(r.spaces[a], m).dim for a in r.poset.elements), Fraction(0)
    )


def lattice_candidates(r: SubspaceRep, limit: int = 60, rounds: int = 2) -> list[Subspace]:
    """Subspaces generated from the V_i by sums and intersections (bounded closure)."""
    n = r.ambient_dim
    found: list = []
    seen: set = set()
    for s in [r.spaces[a] for a in r.poset.elements]:
        if s not in seen:
            seen.add(s)
            found.append(s)
    frontier = list(found)
    for _ in range(rounds):
        if not frontier or len(found) >= limit:
            break
        new = []
        for x in frontier:
            for y in list(found):
                for z in (subspace_sum(x, y), subspace_intersection(x, y)):
                    if z not in seen:
                        seen.add(z)
                        found.append(z)
                        new.append(z)
                        if len(found) >= limit:
                            break
        frontier = new
    return [s for s in found if 0 < s.dim < n]


def _centered(v: int, p: int) -> int:
    return v - p if v > p // 2 else v


def lift_witness(r: SubspaceRep, chi: dict, fp_basis: list | None, p: int | None) -> Subspace | None:
    """Try to realise a destabilising F_p subspace over Q(i).

    Candidates: the centred integer lift of the F_p basis, sums of the V_i
    that the F_p witness contains, intersections of those containing it, and
    the sum/intersection closure of the V_i.  The first candidate (by worst
    margin) with a nonpositive exact margin is returned.
    """
    n = r.ambient_dim
    cands: list = []
    if fp_basis is not None:
        lifted = Subspace.span([[_centered(x, p) for x in row] for row in fp_basis], n)
        cands.append(lifted)
        spaces = _reduce_all(r, p)
        from .exact import FpSubspace, fp_intersection_dim

        wit = FpSubspace(p, n, tuple(tuple(row) for row in fp_basis))
        inside = [a for a in r.poset.elements if fp_intersection_dim(spaces[a], wit) == spaces[a].dim]
        over = [a for a in r.poset.elements if fp_intersection_dim(spaces[a], wit) == wit.dim]
        s = Subspace.zero(n)
        for a in inside:
            s = subspace_sum(s, r.spaces[a])
        cands.append(s)
        s = Subspace.full(n)
        for a in over:
            s = subspace_intersection(s, r.spaces[a])
        cands.append(s)
    best = _worst(r, chi, cands)
    if best is None:
        best = _worst(r, chi, lattice_candidates(r))
    return best


def _worst(r: SubspaceRep, chi: dict, cands: list) -> Subspace | None:
    n = r.ambient_dim
    best, best_val = None, None
    for c in cands:
        if not 0 < c.dim < n:
            continue
        val = margin(r, chi, c)
        if val <= 0 and (best_val is None or val < best_val):
            best, best_val = c, val
    return best


# ------------------------------------------------------------ the certifier


@dataclass
class StabilityReport:
    verdict: str
    witness: Subspace | None = None
    slack: Fraction | None = None
    primes_used: list = field(default_factory=list)
    prime_log: dict = field(default_factory=dict)
    slack_exact: bool = False
    basis: str = ""

    @property
    def stable(self) -> bool:
        return self.verdict == STABLE


def is_stable(
    r: SubspaceRep,
    chi,
    primes: Sequence[int] | None = None,
    need: int = 2,
    cap: int = DEFAULT_CAP,
) -> StabilityReport:
    """Decide chi-stability with a certificate.

    Primes are tried in order; a prime is *good* when every subspace keeps its
    dimension.  ``Stable`` needs ``need`` primes agreeing.  A nonpositive F_p
    margin is only reported as ``Unstable`` once a witness has been lifted and
    re-verified exactly; otherwise that prime counts as a degenerate
    reduction and the next one is tried.
    """
    chi = as_weight(chi, r.poset)
    if validate_rep(r):
        raise RepresentationError(f"invalid representation: {validate_rep(r)}")
    if not check_normalization(r, chi):
        return StabilityReport(NOT_NORMALIZED, basis="exact")
    n = r.ambient_dim
    if n > MAX_AMBIENT:
        raise StabilityError(f"ambient dimension {n} exceeds the enumeration cap {MAX_AMBIENT}")
    elements = r.poset.elements
    if n <= 1:
        # no proper nonzero subspace: stable vacuously
        return StabilityReport(STABLE, slack=None, basis="exact (no proper nonzero subspace)")
    scale = _common_denominator(chi.values())
    weights = [int(chi[a] * scale) for a in elements]
    stable_at: list = []
    slacks: list = []
    log: dict = {}
    fallback_witness = None
    for p in candidate_primes(n, primes, cap):
        try:
            spaces = _reduce_all(r, p)
            val, basis = min_margin(r.poset, spaces, n, p, weights, scale)
        except (BadPrime, ValueError) as exc:
            log[p] = f"bad prime: {exc}"
            continue
        value = Fraction(val, scale)
        if value > 0:
            log[p] = f"stable, min margin {value}"
            stable_at.append(p)
            slacks.append((value, p, basis))
            if len(stable_at) >= need:
                break
            continue
        wit = lift_witness(r, chi, basis, p)
        if wit is not None:
            log[p] = f"unstable, min margin {value}, witness lifted"
            return StabilityReport(
                UNSTABLE,
                witness=wit,
                primes_used=stable_at + [p],
                prime_log=log,
                basis="exact witness over " + r.field(),
            )
        log[p] = f"degenerate reduction, min margin {value}, no exact lift"
        if fallback_witness is None:
            fallback_witness = (p, basis)
    if len(stable_at) >= need:
        value, p, basis = max(slacks, key=lambda s: s[0])
        exact = False
        lifted = Subspace.span([[_centered(x, p) for x in row] for row in basis], n)
        if 0 < lifted.dim < n and margin(r, chi, lifted) == value:
            exact = True
        return StabilityReport(
            STABLE,
            slack=value,
            primes_used=stable_at,
            prime_log=log,
            slack_exact=exact,
            basis=f"F_p-certified at p={stable_at}, valid over Q" + ("" if r.is_real() else "(i) via descent"),
        )
    if not stable_at and fallback_witness is not None:
        return StabilityReport(UNVERIFIED_UNSTABLE, primes_used=[fallback_witness[0]], prime_log=log, basis="F_p only")
    raise PrimesExhausted(f"could not find {need} agreeing good primes: {log}")


def compute_R(r: SubspaceRep, chi, primes=None, cap: int = DEFAULT_CAP) -> Fraction:
    """Minimum stability margin over proper nonzero subspaces (must be positive)."""
    rep = is_stable(r, chi, primes=primes, cap=cap)
    if not rep.stable:
        raise NotStable(f"representation is not stable ({rep.verdict})")
    if rep.slack is None:
        raise NotStable("no proper nonzero subspace: margin undefined")
    return rep.slack


# ------------------------------------------------------------ weights


@dataclass
class StabilizingWeight:
    weight: dict
    slack: Fraction
    report: StabilityReport


def _lp_vectors(r: SubspaceRep, primes, cap: int, need: int) -> tuple[list, list]:
    vectors: set = set()
    used = []
    for p in candidate_primes(r.ambient_dim, primes, cap):
        try:
            vectors |= enumerate_subdim_vectors(r, p, cap)
        except (BadPrime, ValueError):
            continue
        used.append(p)
        if len(used) >= need:
            break
    return sorted(vectors, key=lambda v: (v.m, v.ks)), used


def find_stabilizing_weight(
    r: SubspaceRep, primes=None, cap: int = DEFAULT_CAP, need: int = 2
) -> StabilizingWeight | None:
    """Weight maximising the worst stability margin, or ``None`` if none is positive.

    LP over ``(chi, delta)``: ``sum chi_i dim V_i = dim V``; for each realised
    proper nonzero subdimension vector ``sum chi_i k_i + delta <= m``; and
    ``chi_i >= delta`` so that a positive optimum is a positive weight.
    Among optima the one with least ``sum chi`` and then lexicographically
    least ``chi`` is returned.  The result is re-certified by :func:`is_stable`.
    """
    n = r.ambient_dim
    elements = r.poset.elements
    t = len(elements)
    vectors, used = _lp_vectors(r, primes, cap, need)
    proper = [v for v in vectors if 0 < v.m < n]
    # variables: chi_1..chi_t, delta+, delta-
    a_ub, b_ub = [], []
    for v in proper:
        a_ub.append(list(v.ks) + [1, -1])
        b_ub.append(v.m)
    for i in range(t):
        row = [0] * (t + 2)
        row[i] = -1
        row[t], row[t + 1] = 1, -1
        a_ub.append(row)
        b_ub.append(0)
    norm = [r.spaces[a].dim for a in elements] + [0, 0]
    a_eq, b_eq = [norm], [n]
    try:
        res = maximize([0] * t + [1, -1], a_ub, b_ub, a_eq, b_eq)
    except Infeasible:
        return None
    delta = res.value
    if delta <= 0:
        return None
    a_eq.append([0] * t + [1, -1])
    b_eq.append(delta)
    res = maximize([-1] * t + [0, 0], a_ub, b_ub, a_eq, b_eq)
    a_eq.append([1] * t + [0, 0])
    b_eq.append(-res.value)
    x = res.x
    for i in range(t):
        c = [0] * (t + 2)
        c[i] = -1
        res = maximize(c, a_ub, b_ub, a_eq, b_eq)
        row = [0] * (t + 2)
        row[i] = 1
        a_eq.append(row)
        b_eq.append(res.x[i])
        x = res.x
    weight = {a: x[i] for i, a in enumerate(elements)}
    report = is_stable(r, weight, primes=primes, cap=cap, need=need)
    if not report.stable:
        return None
    return StabilizingWeight(weight, delta, report)


def extend_weight(
    chi_a: dict,
    rep_a: SubspaceRep,
    lam_space_dim: int,
    eps: Fraction | None = None,
    R: Fraction | None = None,
    lam_element: str = "a",
    order: Sequence | None = None,
    primes=None,
) -> dict:
    """Weight on ``S = S_a + {a}`` making the lambda-family stable.

    ``T = 1 + (R - eps) * dim V_lambda / dim V``; old entries are divided by
    ``T`` and the new element gets ``(R - eps) / T``.  ``eps`` defaults to
    ``R / 2``.
    """
    chi_a = as_weight(chi_a, rep_a.poset)
    if R is None:
        R = compute_R(rep_a, chi_a, primes=primes)
    R = Fraction(R)
    eps = R / 2 if eps is None else Fraction(eps)
    if not 0 < eps < R:
        raise StabilityError(f"epsilon must lie strictly between 0 and R = {R}, got {eps}")
    T = 1 + (R - eps) * lam_space_dim / Fraction(rep_a.ambient_dim)
    out = {a: v / T for a, v in chi_a.items()}
    out[lam_element] = (R - eps) / T
    if order is not None:
        out = {a: out[a] for a in order}
    return out
