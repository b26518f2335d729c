"""Finite posets and the combinatorial side of Kleiner's criterion."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Poset:
    """Finite poset; ``less`` is the strict order, transitively closed."""

    elements: tuple
    less: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate element labels")

    @classmethod
    def from_relations(cls, elements: Iterable, relations: Iterable = ()) -> "Poset":
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise PosetError("duplicate element labels")
        known = set(elements)
        pairs = set()
        for a, b in relations:
            for x in (a, b):
                if x not in known:
                    raise PosetError(f"relation references unknown element {x!r}")
            if a == b:
                raise PosetError(f"cycle detected at {a!r}")
            pairs.add((a, b))
        closed = transitive_closure(elements, pairs)
        for a, b in closed:
            if a == b or (b, a) in closed:
                raise PosetError(f"cycle detected through {a!r} and {b!r}")
        return cls(elements, frozenset(closed))

    def __len__(self):
        return len(self.elements)

    def lt(self, a, b) -> bool:
        return (a, b) in self.less

    def le(self, a, b) -> bool:
        return a == b or (a, b) in self.less

    def comparable(self, a, b) -> bool:
        return a == b or (a, b) in self.less or (b, a) in self.less

    def below(self, a) -> list:
        return [x for x in self.elements if (x, a) in self.less]

    def above(self, a) -> list:
        return [x for x in self.elements if (a, x) in self.less]

    def covers(self) -> list[tuple]:
        """Hasse diagram edges ``(a, b)`` with ``b`` covering ``a``."""
        out = []
        for a, b in sorted(self.less, key=lambda ab: (self.index(ab[0]), self.index(ab[1]))):
            if not any((a, c) in self.less and (c, b) in self.less for c in self.elements):
                out.append((a, b))
        return out

    def index(self, a) -> int:
        return self.elements.index(a)

    def height(self) -> int:
        """Length of the longest chain."""
        memo: dict = {}

        def h(a):
            if a not in memo:
                memo[a] = 1 + max((h(b) for b in self.below(a)), default=0)
            return memo[a]

        return max((h(a) for a in self.elements), default=0)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(e) for e in self.covers()]}

    def __repr__(self):
        rel = ", ".join(f"{a}<{b}" for a, b in self.covers())
        return f"Poset({list(self.elements)}; {rel})"


def transitive_closure(elements: Iterable, pairs: Iterable) -> set:
    up: dict = {a: set() for a in elements}
    for a, b in pairs:
        up[a].add(b)
    closed = set()
    for a in up:
        stack, seen = list(up[a]), set()
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(up[x])
        closed.update((a, x) for x in seen)
    return closed




def parse_poset(description) -> Poset:
    """Build a poset from a JSON object, a JSON string, or text like ``"a<b, b<c"``.

    JSON shape: ``{"elements": [...], "relations": [["a", "b"], ...]}``;
    relations may be any generating set.
    """
    if isinstance(description, Poset):
        return description
    if isinstance(description, str):
        text = description.strip()
        if text.startswith("{"):
            description = json.loads(text)
        else:
            elements: list = []
            relations = []
            for chunk in re.split(r"[,;\n]", text):
                chunk = chunk.strip()
                if not chunk:
                    continue
                parts = [p.strip() for p in chunk.split("<")]
                if any(not p for p in parts):
                    raise PosetError(f"malformed relation chunk {chunk!r}")
                for p in parts:
                    if p not in elements:
                        elements.append(p)
                relations.extend(zip(parts, parts[1:]))
            return Poset.from_relations(elements, relations)
    if not isinstance(description, Mapping) or "elements" not in description:
        raise PosetError("poset description needs an 'elements' list")
    elements = [str(e) for e in description["elements"]]
    relations = []
    for rel in description.get("relations", []):
        if len(rel) != 2:
            raise PosetError(f"relation must be a pair, got {rel!r}")
        relations.append((str(rel[0]), str(rel[1])))
    return Poset.from_relations(elements, relations)


def chain(labels: Iterable) -> Poset:
    labels = tuple(labels)
    return Poset.from_relations(labels, zip(labels, labels[1:]))


def antichain(labels: Iterable) -> Poset:
    return Poset.from_relations(tuple(labels))


def disjoint_union(*posets: Poset) -> Poset:
    elements = tuple(x for p in posets for x in p.elements)
    return Poset.from_relations(elements, [r for p in posets for r in p.less])


def primitive(*lengths: int, prefix: str = "abcdefghijklmnopqrstuvwxyz") -> Poset:
    """The primitive poset ``(t1, ..., ts)``; chain k is labelled ``<letter>1 < <letter>2 < ...``."""
    return disjoint_union(*(chain(f"{prefix[k]}{j + 1}" for j in range(t)) for k, t in enumerate(lengths)))


def induced_subposet(p: Poset, subset: Iterable) -> Poset:
    subset = set(subset)
    unknown = subset - set(p.elements)
    if unknown:
        raise PosetError(f"unknown elements {sorted(map(str, unknown))}")
    elements = tuple(x for x in p.elements if x in subset)
    less = frozenset((a, b) for a, b in p.less if a in subset and b in subset)
    return Poset(elements, less)


def delete_element(p: Poset, a) -> Poset:
    if a not in p.elements:
        raise PosetError(f"unknown element {a!r}")
    return induced_subposet(p, [x for x in p.elements if x != a])


def is_primitive(p: Poset) -> tuple | None:
    """Chain lengths if ``p`` is a disjoint union of chains, else ``None``.

    Lengths are reported in increasing order.
    """
    seen: set = set()
    lengths = []
    for a in p.elements:
        if a in seen:
            continue
        comp, stack = set(), [a]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(y for y in p.elements if y != x and p.comparable(x, y))
        seen |= comp
        if any(not p.comparable(x, y) for x in comp for y in comp):
            return None
        lengths.append(len(comp))
    return tuple(sorted(lengths))


# ------------------------------------------------------------ critical posets

CRITICAL_NAMES = ("(1,1,1,1)", "(2,2,2)", "(1,3,3)", "(1,2,5)", "(N,4)")


def _n4() -> Poset:
    # N-part in printed order: n1 < n2, n3 < n2, n3 < n4; then the 4-chain.
    elements = ("n1", "n2", "n3", "n4", "c1", "c2", "c3", "c4")
    rel = [("n1", "n2"), ("n3", "n2"), ("n3", "n4"), ("c1", "c2"), ("c2", "c3"), ("c3", "c4")]
    return Poset.from_relations(elements, rel)


_CRITICAL = {
    "(1,1,1,1)": primitive(1, 1, 1, 1),
    "(2,2,2)": primitive(2, 2, 2),
    "(1,3,3)": primitive(1, 3, 3),
    "(1,2,5)": primitive(1, 2, 5),
    "(N,4)": _n4(),
}


def normalize_name(name: str) -> str:
    key = name.replace(" ", "").upper()
    if not key.startswith("("):
        key = f"({key})"
    for n in CRITICAL_NAMES:
        if n.upper() == key:
            return n
    raise KeyError(f"unknown critical poset {name!r}; expected one of {CRITICAL_NAMES}")


def critical_poset(name: str) -> Poset:
    return _CRITICAL[normalize_name(name)]


def find_embedding(pattern: Poset, host: Poset) -> dict | None:
    """First induced (full) embedding of ``pattern`` into ``host``, or ``None``.

    Backtracking in a fixed order; candidates are filtered by the number of
    elements above/below, which can only grow when passing to a superposet.
    """
    if len(pattern) > len(host):
        return None
    pat = list(pattern.elements)
    p_up = {a: len(pattern.above(a)) for a in pat}
    p_dn = {a: len(pattern.below(a)) for a in pat}
    h_up = {a: len(host.above(a)) for a in host.elements}
    h_dn = {a: len(host.below(a)) for a in host.elements}
    # most constrained pattern elements first
    order = sorted(pat, key=lambda a: (-(p_up[a] + p_dn[a]), pat.index(a)))
    cands = {a: [h for h in host.elements if h_up[h] >= p_up[a] and h_dn[h] >= p_dn[a]] for a in pat}

    assign: dict = {}
    used: set = set()

    def consistent(a, h) -> bool:
        for b, hb in assign.items():
            if pattern.lt(a, b) != host.lt(h, hb) or pattern.lt(b, a) != host.lt(hb, h):
                return False
        return True

    def search(k: int) -> bool:
        if k == len(order):
            return True
        a = order[k]
        for h in cands[a]:
            if h in used or not consistent(a, h):
                continue
            assign[a] = h
            used.add(h)
            if search(k + 1):
                return True
            del assign[a]
            used.discard(h)
        return False

    if search(0):
        return {a: assign[a] for a in pat}
    return None


def find_critical_embedding(p: Poset) -> tuple[str, dict] | None:
    """First critical poset (in catalog order) embedding as a full subposet of ``p``."""
    for name in CRITICAL_NAMES:
        emb = find_embedding(_CRITICAL[name], p)
        if emb is not None:
            return name, emb
    return None


@dataclass(frozen=True)
class FinitenessVerdict:
    kind: str  # "Finite" | "Infinite"
    witness: str | None = None
    embedding: dict | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = self.witness
            out["embedding"] = dict(self.embedding)
        return out


def finiteness_type(p: Poset) -> FinitenessVerdict:
    found = find_critical_embedding(p)
    if found is None:
        return FinitenessVerdict("Finite")
    return FinitenessVerdict("Infinite", found[0], found[1])
