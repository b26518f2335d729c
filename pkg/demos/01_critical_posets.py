"""
Which posets have infinitely many indecomposables?
===================================================

A poset has finite representation type exactly when it contains none of
five small posets as a full subposet.  Here we look at those five, check
that each is minimal, and find one hidden inside a bigger poset.
"""

import json
from pathlib import Path

from orthoposet.poset import CRITICAL_NAMES, critical_poset, delete_element, finiteness_type, parse_poset

# the five critical posets and their sizes
for name in CRITICAL_NAMES:
    p = critical_poset(name)
    print(f"{name:10s} {len(p)} elements, covers {p.covers()}")

# removing any single element makes the type finite
for name in CRITICAL_NAMES:
    p = critical_poset(name)
    kinds = {finiteness_type(delete_element(p, a)).kind for a in p.elements}
    print(name, "minus one element ->", kinds)

# posets can be written as short relation strings
print(finiteness_type(parse_poset("a<b, b<c, c<d, x<y, y<z, u<v")).to_json())
print(finiteness_type(parse_poset("a<b, c<d, e<f, g")).to_json())

# (N,4) with a common top element, read from JSON
data = json.loads((Path(__file__).parent / "n4_plus_top.json").read_text())
verdict = finiteness_type(parse_poset(data))
print("N4 + top:", verdict.kind, "via", verdict.witness, verdict.embedding)
