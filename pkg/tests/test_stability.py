import itertools
from fractions import Fraction

import pytest

from orthoposet.catalog import CRITICAL_NAMES, deleted_rep, family_rep, remark5_weight
from orthoposet.exact import Subspace, gauss, reduce_mod_p, rref_mod_p
from orthoposet.fpenum import decode, gaussian_binomial, min_margin, realised_codes, subspace_count
from orthoposet.poset import antichain
from orthoposet.representation import SubspaceRep
from orthoposet.stability import (
    NOT_NORMALIZED,
    STABLE,
    UNSTABLE,
    NotStable,
    StabilityError,
    check_normalization,
    compute_R,
    extend_weight,
    find_stabilizing_weight,
    is_stable,
    margin,
)


def all_subspaces(n, p):
    vectors = list(itertools.product(range(p), repeat=n))
    seen = set()
    for k in range(n + 1):
        for combo in itertools.combinations(vectors, k):
            seen.add(tuple(map(tuple, rref_mod_p([list(v) for v in combo], p))))
    return seen


def brute_subdims(r, p):
    """(m, k_1..k_t) for every subspace of F_p^n, by listing vectors."""
    n = r.ambient_dim
    spaces = {a: reduce_mod_p(r.spaces[a], p) for a in r.poset.elements}
    out = set()
    for basis in all_subspaces(n, p):
        m = len(basis)
        ks = []
        for a in r.poset.elements:
            both = rref_mod_p([list(x) for x in basis] + [list(x) for x in spaces[a].basis], p)
            ks.append(m + spaces[a].dim - len(both))
        out.add((m, tuple(ks)))
    return out


@pytest.mark.parametrize("n, p", [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)])
def test_subspace_count_matches_listing(n, p):
    assert subspace_count(n, p) == len(all_subspaces(n, p))
    assert gaussian_binomial(4, 2, 2) == 35


@pytest.mark.parametrize("name, p", [("(1,1,1,1)", 3), ("(1,1,1,1)", 5), ("(2,2,2)", 3), ("(2,2,2)", 2)])
def test_kernel_subdimension_vectors_match_brute_force(name, p):
    r = family_rep(name, 2).rep
    spaces = {a: reduce_mod_p(r.spaces[a], p) for a in r.poset.elements}
    if any(spaces[a].dim != r.spaces[a].dim for a in spaces):
        pytest.skip("degenerate reduction")
    got = {decode(c, r.ambient_dim, len(r.poset)) for c in realised_codes(r.poset, spaces, r.ambient_dim, p)}
    assert got == brute_subdims(r, p)


def test_min_margin_matches_brute_force():
    r = family_rep("(2,2,2)", 5).rep
    p, n = 3, 3
    chi = remark5_weight("(2,2,2)")
    scale = 3
    weights = [int(chi[a] * scale) for a in r.poset.elements]
    spaces = {a: reduce_mod_p(r.spaces[a], p) for a in r.poset.elements}
    best, basis = min_margin(r.poset, spaces, n, p, weights, scale)
    brute = min(scale * m - sum(w * k for w, k in zip(weights, ks)) for m, ks in brute_subdims(r, p) if 0 < m < n)
    assert best == brute
    assert 0 < len(basis) < n


def test_normalization():
    for name in CRITICAL_NAMES:
        assert check_normalization(family_rep(name, 3).rep, remark5_weight(name))
    r = family_rep("(1,1,1,1)", 2).rep
    assert is_stable(r, [1, 1, 1, 1]).verdict == NOT_NORMALIZED


@pytest.mark.parametrize("name", ["(1,1,1,1)", "(2,2,2)", "(1,3,3)", "(N,4)"])
def test_catalog_stable_with_slack(name):
    rep = is_stable(family_rep(name, 2).rep, remark5_weight(name))
    assert rep.verdict == STABLE and rep.slack > 0 and len(rep.primes_used) == 2
    assert rep.slack_exact


def test_slack_values():
    expected = {"(1,1,1,1)": Fraction(1, 2), "(2,2,2)": Fraction(1, 3), "(1,3,3)": Fraction(1, 4)}
    for name, value in expected.items():
        assert is_stable(family_rep(name, -1).rep, remark5_weight(name)).slack == value


@pytest.mark.parametrize("lam", [0, 1])
def test_excluded_parameters_are_unstable(lam):
    r = family_rep("(1,1,1,1)", lam).rep
    chi = remark5_weight("(1,1,1,1)")
    rep = is_stable(r, chi)
    assert rep.verdict == UNSTABLE
    assert margin(r, chi, rep.witness) <= 0


def test_degenerate_prime_is_skipped():
    # lambda = 3 collapses two lines modulo 3; the certificate must come from other primes
    r = family_rep("(1,3,3)", 3).rep
    rep = is_stable(r, remark5_weight("(1,3,3)"), primes=[3, 5, 7])
    assert rep.verdict == STABLE and 3 not in rep.primes_used


def test_gaussian_parameter_uses_split_primes():
    r = family_rep("(1,1,1,1)", gauss(0, 1)).rep
    rep = is_stable(r, remark5_weight("(1,1,1,1)"))
    assert rep.verdict == STABLE
    assert all(p % 4 == 1 for p in rep.primes_used)


def test_three_lines_pipeline():
    r = deleted_rep("(1,1,1,1)")
    sw = find_stabilizing_weight(r)
    assert list(sw.weight.values()) == [Fraction(2, 3)] * 3 and sw.slack == Fraction(1, 3)
    assert compute_R(r, sw.weight) == Fraction(1, 3)
    ext = extend_weight(sw.weight, r, 1, eps=Fraction(1, 6), lam_element="d1")
    assert list(ext.values()) == [Fraction(8, 13)] * 3 + [Fraction(2, 13)]
    assert sum(ext.values()) == 2  # four lines in the plane, each of dimension 1
    with pytest.raises(StabilityError):
        extend_weight(sw.weight, r, 1, eps=Fraction(1, 3))


@pytest.mark.parametrize("name", ["(2,2,2)", "(1,3,3)", "(N,4)"])
def test_found_weights_stabilise_the_family(name):
    r = deleted_rep(name)
    sw = find_stabilizing_weight(r)
    assert sw is not None and sw.slack > 0
    inst = family_rep(name, 2)
    chi = extend_weight(sw.weight, r, inst.rep.spaces[inst.lambda_element].dim,
                        lam_element=inst.lambda_element, order=inst.rep.poset.elements)
    assert check_normalization(inst.rep, chi)
    assert is_stable(inst.rep, chi).verdict == STABLE


def test_no_stabilising_weight_for_repeated_line():
    p = antichain(["a", "b"])
    r = SubspaceRep.from_vectors(p, 2, {"a": [[1, 0]], "b": [[1, 0]]})
    assert find_stabilizing_weight(r) is None
    with pytest.raises(NotStable):
        compute_R(r, [1, 1])


def test_cost_guard():
    p = antichain(["a"])
    r = SubspaceRep(p, 7, {"a": Subspace.coordinate(7, [1])})
    with pytest.raises(StabilityError):
        is_stable(r, [7])
