"""
From equivalence to unitary equivalence
========================================

Two balanced representations that are related by any invertible map are
already related by a unitary one: the unitary factor of the map's polar
decomposition.  We also push a balanced representation up to a larger
poset without breaking the identity.
"""

from fractions import Fraction

import numpy as np

from orthoposet.catalog import critical_poset, extend_to_superposet, family_rep, remark5_weight, with_top
from orthoposet.representation import hom_space, transform
from orthoposet.unitary import extract_unitary, intertwiner, diagonal_lemma_instance, lemma1_verify, unitarize

name = "(N,4)"
r = family_rep(name, 2).rep
chi = remark5_weight(name)

# a random rational change of basis
rng = np.random.default_rng(3)
g0 = [[Fraction(int(x)) for x in row] for row in rng.integers(-3, 4, size=(5, 5))]
w = transform(r, g0)

u, u2 = unitarize(r, chi).unitary, unitarize(w, chi).unitary
h = hom_space(r, w).basis[0]  # schurian: the only intertwiners are multiples of g0
g = intertwiner(u, u2, h)
ex = extract_unitary(u, u2, g)
print("eigenvalues of the positive part:", ex.diag)  # all equal
print("max |phi P phi* - P'| =", ex.error)
print("lemma check:", lemma1_verify(*diagonal_lemma_instance(u, u2, ex), list(chi.values())).verdict)

# %%
# A poset with a top element
# --------------------------
host = with_top(critical_poset(name))
emb = {a: a for a in critical_poset(name).elements}
ext, chi_ext = extend_to_superposet(host, emb, u, chi)
print("weights on the superposet:", {a: round(v, 4) for a, v in chi_ext.items()})
print(f"residual {u.residual:.2e} -> {ext.residual:.2e}")
