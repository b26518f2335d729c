"""
Solving sum chi_i P_i = 1
=========================

For a stable representation there is an inner product in which the
weighted orthogonal projections onto the subspaces add up to the identity.
The balancing flow finds it by repeatedly rescaling with S^(-1/2).
"""

import numpy as np

from orthoposet.catalog import CRITICAL_NAMES, family_rep, remark5_weight
from orthoposet.unitary import unitarize, unitary_from_exact

np.set_printoptions(precision=4, suppress=True)

# in the standard inner product the identity fails
r = family_rep("(1,1,1,1)", 2).rep
chi = remark5_weight("(1,1,1,1)")
print("standard metric residual", unitary_from_exact(r, chi).residual)

res = unitarize(r, chi)
u = res.unitary
print(f"{res.trace.status} in {res.trace.iterations} iterations, residual {u.residual:.2e}")
print("metric G =\n", u.metric.real)
for a, P in u.projections.items():
    print(a, "\n", P.real)

# every family converges; iteration counts grow with the dimension
for name in CRITICAL_NAMES:
    res = unitarize(family_rep(name, 3).rep, remark5_weight(name))
    hist = res.trace.residual_history
    print(f"{name:10s} {res.trace.iterations:4d} iterations, residual {hist[0]:.2e} -> {hist[-1]:.2e}")

# an unstable input stalls: the residual creeps down without reaching tolerance
res = unitarize(family_rep("(1,1,1,1)", 1).rep, chi, max_iter=5000)
print(res.trace.status, res.trace.reason)
