"""Slow, independent reference computations used as test oracles.

Nothing here touches the dense tables, the stabilizer chain or the lattice
code: groups are sets of image tuples and subgroups are frozensets of them.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction


def compose(a: tuple, b: tuple) -> tuple:
    """Apply a, then b."""
    return tuple(b[i] for i in a)


def closure(gens, degree: int) -> frozenset:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def elements(G) -> frozenset:
    return closure([g.images for g in G.generators], G.degree)


def all_subgroups(G, max_gens: int | None = None) -> set[frozenset]:
    """Subgroups generated by at most ``max_gens`` elements, closed under intersection.

    With max_gens = 3 this covers every subgroup of the small test groups; the
    intersection check below asserts that nothing was missed structurally.
    """
    elts = sorted(elements(G))
    d = G.degree
    if max_gens is None:
        max_gens = 3 if len(elts) <= 24 else 2
    subs: set[frozenset] = set()
    for k in range(max_gens + 1):
        for gens in itertools.combinations(elts, k):
            subs.add(closure(gens, d))
    for a, b in itertools.combinations(list(subs), 2):
        assert a & b in subs, "subgroup family not closed under intersection"
    return subs


def mobius(subs: set[frozenset], top: frozenset) -> dict[frozenset, int]:
    mu = {}
    for H in sorted(subs, key=len, reverse=True):
        if H == top:
            mu[H] = 1
        else:
            mu[H] = -sum(mu[K] for K in mu if len(K) > len(H) and H < K)
    return mu


def zeta_coefficients(G, subs=None) -> dict[int, int]:
    top = elements(G)
    subs = subs if subs is not None else all_subgroups(G)
    mu = mobius(subs, top)
    acc: dict[int, int] = defaultdict(int)
    for H, m in mu.items():
        if m:
            acc[len(top) // len(H)] += m
    return {n: a for n, a in sorted(acc.items()) if a}


def maximal_subgroups(G, subs=None) -> set[frozenset]:
    top = elements(G)
    subs = subs if subs is not None else all_subgroups(G)
    proper = [H for H in subs if H != top]
    return {H for H in proper if not any(H < K for K in proper)}


def generating_tuples(G, k: int) -> int:
    top = elements(G)
    d = G.degree
    return sum(1 for tup in itertools.product(sorted(top), repeat=k) if len(closure(tup, d)) == len(top))


def generation_ratio(G, k: int) -> Fraction:
    n = len(elements(G))
    return Fraction(generating_tuples(G, k), n**k)


def to_bits(G, subset) -> int:
    from probzeta.permgroup import Perm

    D = G.dense()
    bits = 0
    for x in subset:
        bits |= 1 << D.index(Perm(list(x)))
    return bits
