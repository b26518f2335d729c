"""
Certifying stability over the rationals
========================================

A one-parameter family over each critical poset, with a fixed weight, is
stable for every parameter except 0 and 1.  Stability is a statement about
all subspaces; we certify it by walking every subspace over a finite field
and transferring the answer back.
"""

from fractions import Fraction

from orthoposet.catalog import deleted_rep, family_rep, remark5_weight
from orthoposet.stability import compute_R, extend_weight, find_stabilizing_weight, is_stable, margin

chi = remark5_weight("(2,2,2)")
print("weight:", [str(v) for v in chi.values()])

for lam in [2, 3, Fraction(1, 2), -1]:
    report = is_stable(family_rep("(2,2,2)", lam).rep, chi)
    print(f"lambda={lam!s:4s} {report.verdict}, slack {report.slack}, primes {report.primes_used}")

# at lambda = 1 two lines of the plane coincide; the certifier returns a witness
r = family_rep("(1,1,1,1)", 1).rep
chi4 = remark5_weight("(1,1,1,1)")
report = is_stable(r, chi4)
print(report.verdict, "witness", report.witness, "margin", margin(r, chi4, report.witness))

# %%
# Finding a weight from scratch
# -----------------------------
# Three lines in the plane: the best weight is 2/3 each with slack 1/3.
lines = deleted_rep("(1,1,1,1)")
sw = find_stabilizing_weight(lines)
print("best weight", [str(v) for v in sw.weight.values()], "slack", sw.slack)
print("R =", compute_R(lines, sw.weight))

# adding a fourth line: scale by T and give the newcomer R - eps
full = family_rep("(1,1,1,1)", 2)
chi_ext = extend_weight(sw.weight, lines, 1, eps=Fraction(1, 6), lam_element="d1", order=full.rep.poset.elements)
print("extended", [str(v) for v in chi_ext.values()], is_stable(full.rep, chi_ext).verdict)
