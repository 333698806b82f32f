"""Small permutation groups: closure, conjugacy, maximal cyclic subgroups, and
the Frobenius covering computation that produces the prime sets T and T'.

Permutations are image tuples on {0..n-1}; groups materialize their full
element list (order capped at 10^4), which keeps conjugacy queries trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

ORDER_BUDGET = 10**4


class OrderBudget(RuntimeError):
    """Closure exceeded the group-order budget."""


class IndexMismatch(ValueError):
    """Generated subgroup does not have the expected index."""


class Exhausted(RuntimeError):
    """The Frobenius stream ended before the covering was complete."""


Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Perm, b: Perm) -> Perm:
    """Apply a first, then b."""
    return tuple(b[x] for x in a)


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_power(a: Perm, k: int) -> Perm:
    n = len(a)
    if k < 0:
        a, k = inverse(a), -k
    result = identity(n)
    while k:
        if k & 1:
            result = compose(result, a)
        a = compose(a, a)
        k >>= 1
    return result


def perm_order(a: Perm) -> int:
    order = 1
    for length in cycle_type(a):
        order = order * length // gcd(order, length)
    return order


def cycle_type(a: Perm) -> tuple[int, ...]:
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        out.append(length)
    return tuple(sorted(out))


class PermGroup:
    """A permutation group with its full element list materialized."""

    def __init__(self, degree: int, generators: Sequence[Perm], budget: int = ORDER_BUDGET):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of {degree} points: {g}")
        self.elements = _closure(degree, self.generators, budget)
        self.order = len(self.elements)
        self._elset = set(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return tuple(g) in self._elset

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def conjugacy_class(self, g: Perm) -> frozenset[Perm]:
        return frozenset(compose(compose(inverse(h), g), h) for h in self.elements)

    def subgroup_conjugates(self, sub: frozenset[Perm]) -> frozenset[frozenset[Perm]]:
        out = set()
        for h in self.elements:
            hinv = inverse(h)
            out.add(frozenset(compose(compose(hinv, g), h) for g in sub))
        return frozenset(out)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            compose(a, b) == compose(b, a) for a in gens for b in gens
        )

    def exponent(self) -> int:
        e = 1
        for g in self.elements:
            o = perm_order(g)
            e = e * o // gcd(e, o)
        return e


def _closure(degree: int, generators: Sequence[Perm], budget: int) -> list[Perm]:
    e = identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                c = compose(a, g)
                if c not in seen:
                    seen.add(c)
                    if len(seen) > budget:
                        raise OrderBudget(f"group order exceeds {budget}")
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def generate(perms: Iterable[Perm], degree: Optional[int] = None) -> PermGroup:
    perms = [tuple(p) for p in perms]
    if degree is None:
        if not perms:
            raise ValueError("degree required for the empty generating set")
        degree = len(perms[0])
    return PermGroup(degree, perms)


def subgroup_from_split_condition(
    G: PermGroup,
    frobs: Sequence[tuple[int, Perm, int]],
    expected_index: int,
) -> PermGroup:
    """The subgroup fixing the base field: generated by Frob_q for q split in K
    and Frob_q^{f(q in K)} for q inert, checked to have the expected index.

    `frobs` entries are (q, permutation, residue degree of q in K).
    """
    gens = []
    for _q, perm, f_in_k in frobs:
        gens.append(perm if f_in_k == 1 else perm_power(perm, f_in_k))
    H = PermGroup(G.degree, gens)
    if G.order % H.order or G.order // H.order != expected_index:
        raise IndexMismatch(
            f"generated subgroup has index {G.order / H.order}, expected {expected_index}"
        )
    return H


@dataclass(frozen=True)
class CyclicClass:
    """A conjugacy class of maximal cyclic subgroups."""

    generator: Perm
    order: int
    class_size: int
    members: frozenset[frozenset[Perm]] = field(compare=False, repr=False)


def maximal_cyclic_classes(G: PermGroup) -> list[CyclicClass]:
    """Maximal cyclic subgroups, one representative per conjugacy class,
    sorted by (order descending, canonical key)."""
    cyclic: dict[frozenset[Perm], Perm] = {}
    for g in G.elements:
        if g == identity(G.degree):
            continue
        sub = frozenset(_cyclic(g))
        if sub not in cyclic or perm_order(cyclic[sub]) < perm_order(g):
            cyclic[sub] = g
    subs = list(cyclic)
    maximal = [
        s for s in subs if not any(s < t for t in subs)
    ]
    out = []
    seen: set[frozenset[frozenset[Perm]]] = set()
    for s in maximal:
        conj = G.subgroup_conjugates(s)
        if conj in seen:
            continue
        seen.add(conj)
        rep = min(conj, key=lambda sub: sorted(sub))
        gen = max(rep, key=lambda g: (perm_order(g), g))
        out.append(CyclicClass(gen, perm_order(gen), len(conj), conj))
    out.sort(key=lambda c: (-c.order, sorted(min(c.members, key=sorted))))
    return out


def _cyclic(g: Perm) -> list[Perm]:
    out = [g]
    n = len(g)
    cur = g
    while True:
        cur = compose(cur, g)
        out.append(cur)
        if cur == identity(n):
            return out


@dataclass(frozen=True)
class CoverEntry:
    label: str
    norm: int
    covered: tuple[tuple[int, int], ...]  # (class index, power k) pairs


@dataclass(frozen=True)
class TestSet:
    """The output prime set with per-prime coverage records."""

    __test__ = False  # keep pytest from collecting the name

    mode: str  # "charpoly" | "trace"
    entries: tuple[CoverEntry, ...]

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.entries]


def cover_charpoly(
    G: PermGroup,
    classes: Sequence[CyclicClass],
    frob_stream: Iterable[tuple[str, int, Perm]],
) -> TestSet:
    """Greedy covering in stream order: a prime is kept when some power of its
    Frobenius generates a not-yet-covered maximal cyclic class up to conjugacy.

    Stream items are (label, norm, permutation).
    """
    remaining = set(range(len(classes)))
    entries: list[CoverEntry] = []
    for label, norm, sigma in frob_stream:
        if not remaining:
            break
        got: list[tuple[int, int]] = []
        for idx in sorted(remaining):
            k = _covering_power(G, sigma, classes[idx])
            if k is not None:
                got.append((idx, k))
        if got:
            for idx, _ in got:
                remaining.discard(idx)
            entries.append(CoverEntry(label, norm, tuple(got)))
    if remaining:
        raise Exhausted(f"classes not covered: {sorted(remaining)}")
    return TestSet("charpoly", tuple(entries))


def _covering_power(G: PermGroup, sigma: Perm, cls: CyclicClass) -> Optional[int]:
    """Smallest k >= 1 with <sigma^k> conjugate to the class subgroup."""
    target_order = cls.order
    o = perm_order(sigma)
    for k in range(1, o + 1):
        pk = perm_power(sigma, k)
        if perm_order(pk) != target_order:
            continue
        sub = frozenset(_cyclic(pk))
        if sub in cls.members:
            return k
    return None


def cover_trace(
    G: PermGroup,
    classes: Sequence[CyclicClass],
    n: int,
    equal_det: bool,
    frob_stream: Iterable[tuple[str, int, Perm]],
) -> TestSet:
    """Cover, up to conjugacy, every g^k for each class generator g and
    1 <= k <= n (n-1 when the determinants are known equal); elements shared
    between classes are covered once."""
    kmax = n - 1 if equal_det else n
    targets: dict[frozenset[Perm], list[tuple[int, int]]] = {}
    for idx, cls in enumerate(classes):
        for k in range(1, kmax + 1):
            el = perm_power(cls.generator, k)
            c = G.conjugacy_class(el)
            targets.setdefault(c, []).append((idx, k))
    remaining = dict(targets)
    entries: list[CoverEntry] = []
    for label, norm, sigma in frob_stream:
        if not remaining:
            break
        cls_sigma = G.conjugacy_class(sigma)
        if cls_sigma in remaining:
            covered = remaining.pop(cls_sigma)
            entries.append(CoverEntry(label, norm, tuple(covered)))
    if remaining:
        raise Exhausted(f"{len(remaining)} trace targets not covered")
    return TestSet("trace", tuple(entries))
