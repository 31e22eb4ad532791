"""Subgroup lattices, Moebius functions and structural queries.

Subgroups of a dense group are Python int bitsets over element ids.  Two
Moebius engines share one recursion:

* ``enumerate_subgroups`` + ``mobius_full`` walk the whole lattice, found by
  cyclic extension (every subgroup is reached from a smaller one by adjoining
  one element).
* ``mobius_supplements`` only looks at intersections of maximal subgroups that
  supplement a normal subgroup N.  Subgroups with nonzero Moebius value are
  intersections of maximal subgroups, so nothing is lost, and groups of order
  several thousand stay tractable.

Maximal subgroups are computed without the full lattice by recursing on a
minimal normal subgroup N0: maximal subgroups either contain N0 (pull back
from G/N0) or supplement it, and a maximal supplement M is either a complement
of N0 or the normalizer of a subgroup of N0 of product or diagonal type.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import DirichletPoly
from .permgroup import DenseGroup, Perm, PermGroup, SizeRefusal, quotient_by_normal

FULL_LATTICE_BOUND = 2500
# simple components are enumerated in full while computing maximal subgroups;
# their lattices are small relative to the order, so a looser bound applies
COMPONENT_LATTICE_BOUND = 10000
AUTOMORPHISM_BOUND = 1000
COMPLEMENT_SEARCH_LIMIT = 2_000_000


@dataclass
class SubgroupClass:
    rep: int  # bitset of a representative
    order: int
    index: int
    size: int  # number of conjugates
    mu: int | None = None
    members: list[int] = field(default_factory=list, repr=False)


@dataclass
class SubgroupLattice:
    group: PermGroup
    classes: list[SubgroupClass]
    inclusion: dict[tuple[int, int], int]  # (i, j) -> conjugates of class j containing rep of class i
    mode: str = "full"  # "full" or "supplements"
    normal: int | None = None  # bitset of N in supplements mode
    above: int | None = None  # bitset of K when restricted to subgroups containing K

    @property
    def dense(self) -> DenseGroup:
        return self.group.dense()

    def class_of(self, bits: int) -> int:
        for i, c in enumerate(self.classes):
            if c.order == bits.bit_count() and bits in c.members:
                return i
        raise KeyError("subgroup not in lattice")

    def includes(self, i: int, j: int) -> bool:
        """Whether some conjugate of class i lies in class j's representative."""
        return i == j or self.inclusion.get((i, j), 0) > 0

    def polynomial(self) -> DirichletPoly:
        """sum over stored subgroups H of mu(H) / |G:H|^s."""
        acc: dict[int, int] = defaultdict(int)
        for c in self.classes:
            if c.mu:
                acc[c.index] += c.size * c.mu
        return DirichletPoly(acc)

    def all_subgroups(self) -> list[int]:
        return [b for c in self.classes for b in c.members]

    # cache file

    def to_dict(self) -> dict:
        D = self.dense
        return {
            "group": self.group.fingerprint(),
            "order": D.n,
            "mode": self.mode,
            "classes": [
                {
                    "order": c.order,
                    "index": c.index,
                    "size": c.size,
                    "mu": c.mu,
                    "generators": [D.E[int(i)].tolist() for i in D.small_generators(D.to_mask(c.rep))],
                }
                for c in self.classes
            ],
            "inclusion": [[i, j, k] for (i, j), k in sorted(self.inclusion.items())],
        }

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_dict(cls, data: dict, group: PermGroup) -> SubgroupLattice:
        if data["group"] != group.fingerprint():
            raise ValueError("lattice cache belongs to a different group")
        D = group.dense()
        classes = []
        for c in data["classes"]:
            mask = D.closure([D.index(Perm(g)) for g in c["generators"]])
            rep = D.to_bits(mask)
            classes.append(SubgroupClass(rep, c["order"], c["index"], c["size"], c["mu"]))
        inclusion = {(i, j): k for i, j, k in data["inclusion"]}
        return cls(group, classes, inclusion, mode=data["mode"])

    @classmethod
    def load(cls, path: str, group: PermGroup) -> SubgroupLattice:
        with open(path) as fh:
            return cls.from_dict(json.load(fh), group)


# ---------------------------------------------------------------- Moebius core


def _classes_from_family(D: DenseGroup, family: set[int]) -> list[SubgroupClass]:
    """Partition a conjugation-closed family of subgroups into classes."""
    seen: set[int] = set()
    classes = []
    for bits in sorted(family, key=lambda b: (b.bit_count(), b)):
        if bits in seen:
            continue
        orbit = D.conjugacy_orbit_bits(bits)
        missing = [b for b in orbit if b not in family]
        if missing:
            raise ValueError("subgroup family is not closed under conjugation")
        seen.update(orbit)
        order = bits.bit_count()
        classes.append(SubgroupClass(min(orbit), order, D.n // order, len(orbit), members=sorted(orbit)))
    return classes


def _mobius(D: DenseGroup, classes: list[SubgroupClass]) -> dict[tuple[int, int], int]:
    """Fill in mu on every class, top-down; returns inclusion counts."""
    by_order: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for j, c in enumerate(classes):
        for b in c.members:
            by_order[c.order].append((b, j))
    inclusion: dict[tuple[int, int], int] = {}
    order_idx = sorted(range(len(classes)), key=lambda i: -classes[i].order)
    for i in order_idx:
        c = classes[i]
        h = c.rep
        counts: dict[int, int] = defaultdict(int)
        for order, members in by_order.items():
            if order <= c.order or order % c.order:
                continue
            for b, j in members:
                if b & h == h:
                    counts[j] += 1
        for j, k in counts.items():
            inclusion[(i, j)] = k
        if c.order == D.n:
            c.mu = 1
        else:
            c.mu = -sum(k * classes[j].mu for j, k in counts.items())
    return inclusion


# ---------------------------------------------------------------- full lattice


def enumerate_subgroups(G: PermGroup, bound: int = FULL_LATTICE_BOUND) -> SubgroupLattice:
    """All conjugacy classes of subgroups, found by cyclic extension."""
    n = G.order()
    if n > bound:
        raise SizeRefusal(f"full lattice refused for order {n} > {bound}; use supplements mode")
    D = G.dense()
    T = D.table
    orders = D.element_orders
    family: dict[int, int] = {}
    reps: list[int] = []

    def register(mask: np.ndarray) -> None:
        bits = D.to_bits(mask)
        if bits in family:
            return
        cid = len(reps)
        for b in D.conjugacy_orbit_bits(bits):
            family[b] = cid
        reps.append(bits)

    triv = np.zeros(n, dtype=bool)
    triv[0] = True
    register(triv)
    i = 0
    while i < len(reps):
        hmask = D.to_mask(reps[i])
        i += 1
        if hmask.all():
            continue
        hids = np.flatnonzero(hmask)
        norm = D.normalizer(hmask)
        nconj = [D.conj_map(int(g)) for g in D.small_generators(norm)]
        covered = hmask.copy()
        for x in range(n):
            if covered[x]:
                continue
            register(D.closure([x], start=hmask))
            # every y with <H, y> = <H, x> up to N_G(H)-conjugacy is skipped
            o = int(orders[x])
            powers = [x]
            y = x
            for j in range(2, o):
                y = int(T[y, x])
                if np.gcd(j, o) == 1:
                    powers.append(y)
            pw = np.array(powers, dtype=np.int64)
            cover = np.zeros(n, dtype=bool)
            left = T[np.ix_(hids, pw)].astype(np.int64).ravel()
            left = np.unique(left)
            cover[T[np.ix_(left, hids)].astype(np.int64).ravel()] = True
            frontier = np.flatnonzero(cover)
            while frontier.size and nconj:
                new = np.unique(np.concatenate([c[frontier] for c in nconj]))
                new = new[~cover[new]]
                cover[new] = True
                frontier = new
            covered |= cover
    family_set = set(family)
    classes = _classes_from_family(D, family_set)
    for c in classes:
        if n % c.size:
            raise AssertionError("class size does not divide the group order")
    return SubgroupLattice(G, classes, {}, mode="full")


def mobius_full(L: SubgroupLattice) -> SubgroupLattice:
    if L.mode != "full":
        raise ValueError("mobius_full needs a full lattice")
    L.inclusion = _mobius(L.dense, L.classes)
    return L


def full_lattice(G: PermGroup, bound: int = FULL_LATTICE_BOUND) -> SubgroupLattice:
    """Cached enumerate_subgroups + mobius_full."""
    cache = G.__dict__.setdefault("_lattice_cache", {})
    if "full" not in cache:
        cache["full"] = mobius_full(enumerate_subgroups(G, bound))
    return cache["full"]


# ---------------------------------------------------------------- normal structure


def _popcount(bits: int) -> int:
    return bits.bit_count()


def normal_subgroups(G: PermGroup) -> list[int]:
    """All normal subgroups as bitsets, sorted by order."""
    cache = G.__dict__.setdefault("_lattice_cache", {})
    if "normal" in cache:
        return cache["normal"]
    D = G.dense()
    closures = []
    for x in D.class_representatives:
        if x:
            closures.append(D.to_bits(D.normal_closure([x])))
    found = {1} | set(closures)
    queue = list(found)
    for a in queue:
        for b in closures:
            if a | b == a:
                continue
            j = D.to_bits(D.closure(D.ids(b), start=D.to_mask(a)))
            if j not in found:
                found.add(j)
                queue.append(j)
    out = sorted(found, key=lambda b: (_popcount(b), b))
    cache["normal"] = out
    return out


def minimal_normal_subgroups(G: PermGroup) -> list[int]:
    D = G.dense()
    closures = {D.to_bits(D.normal_closure([x])) for x in D.class_representatives if x}
    return sorted(b for b in closures if not any(o != b and o & b == o for o in closures))


def chief_series(G: PermGroup) -> list[int]:
    """G = G_0 > G_1 > ... > G_k = 1 as bitsets, built from the bottom."""
    D = G.dense()
    classes = [D.conjugacy_class(x) for x in D.class_representatives if x]
    cur = np.zeros(D.n, dtype=bool)
    cur[0] = True
    series = [D.to_bits(cur)]
    while not cur.all():
        # smallest normal subgroup properly above cur is minimal over it
        best = None
        for cls in classes:
            if cur[cls].all():
                continue
            cand = D.closure(np.flatnonzero(cls), start=cur)
            if best is None or (cand.sum(), D.to_bits(cand)) < (best.sum(), D.to_bits(best)):
                best = cand
        cur = best
        series.append(D.to_bits(cur))
    return series[::-1]


def is_abelian_bits(D: DenseGroup, bits: int) -> bool:
    gens = D.small_generators(D.to_mask(bits))
    T = D.table
    return all(T[a, b] == T[b, a] for a in gens for b in gens)


# ---------------------------------------------------------------- complements


def _quotient_generators(D: DenseGroup, nmask: np.ndarray) -> list[int]:
    """Generator ids of G whose images generate G/N, chosen greedily."""
    chosen: list[int] = []
    cur = nmask.copy()
    for g in D.gen_ids:
        if cur.all():
            break
        if not cur[g]:
            chosen.append(g)
            cur = D.closure([g], start=cur)
    return chosen


def complements(D: DenseGroup, nmask: np.ndarray, limit: int = COMPLEMENT_SEARCH_LIMIT) -> list[int]:
    """All complements of the normal subgroup N (as bitsets).

    Each complement contains exactly one lift of each chosen quotient generator,
    so complements correspond to generator lifts that close up to a subgroup of
    order |G:N| meeting N trivially.
    """
    T = D.table
    nids = np.flatnonzero(nmask)
    target = D.n // nids.size
    gens = _quotient_generators(D, nmask)
    if nids.size ** len(gens) > limit:
        raise SizeRefusal(f"complement search over {nids.size}^{len(gens)} lifts refused")
    out = []
    lifts = [T[g, nids].astype(np.int64) for g in gens]
    for choice in itertools.product(*lifts):
        K = D.closure(choice, cap=target)
        if K is None or K.sum() != target or (K & nmask).sum() != 1:
            continue
        out.append(D.to_bits(K))
    return out


def complements_count(G: PermGroup, A: PermGroup | np.ndarray) -> int:
    D = G.dense()
    amask = A if isinstance(A, np.ndarray) else _mask_of(G, A)
    if not D.is_normal(amask):
        raise ValueError("A must be normal")
    if not is_abelian_bits(D, D.to_bits(amask)):
        raise ValueError("complement counting is only provided for abelian A")
    return len(complements(D, amask))


def _mask_of(G: PermGroup, H: PermGroup) -> np.ndarray:
    D = G.dense()
    return D.closure([D.index(h) for h in H.generators])


# ---------------------------------------------------------------- automorphisms


@dataclass
class Automorphisms:
    """All automorphisms of a group, as permutations of its element ids."""

    maps: list[np.ndarray]
    group: PermGroup  # acting on element ids

    def order(self) -> int:
        return len(self.maps)


def automorphism_group(A: PermGroup, bound: int = AUTOMORPHISM_BOUND) -> Automorphisms:
    n = A.order()
    if n > bound:
        raise SizeRefusal(f"automorphism search refused for order {n} > {bound}")
    D = A.dense()
    if n == 1:
        ident = np.zeros(1, dtype=np.int64)
        return Automorphisms([ident], PermGroup([], degree=1))
    T = D.table
    orders = D.element_orders
    gens = [int(g) for g in D.small_generators(np.ones(n, dtype=bool))]
    # BFS layers of the Cayley graph on the small generating set
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    layers = []
    while frontier.size:
        kids, pars, ks = [], [], []
        for k, s in enumerate(gens):
            nxt = T[frontier, s].astype(np.int64)
            fresh = ~seen[nxt]
            # keep first occurrence only
            nxt_f, idx = np.unique(nxt[fresh], return_index=True)
            seen[nxt_f] = True
            kids.append(nxt_f)
            pars.append(frontier[fresh][idx])
            ks.append(np.full(nxt_f.size, k))
        kids = np.concatenate(kids)
        if not kids.size:
            break
        layers.append((kids, np.concatenate(pars), np.concatenate(ks)))
        frontier = kids
    candidates = [np.flatnonzero(orders == orders[s]) for s in gens]
    maps = []
    ids = np.arange(n)
    for imgs in itertools.product(*candidates):
        imgs = np.array(imgs, dtype=np.int64)
        phi = np.zeros(n, dtype=np.int64)
        for kids, pars, ks in layers:
            phi[kids] = T[phi[pars], imgs[ks]]
        if np.unique(phi).size != n:
            continue
        if all((phi[T[ids, s]] == T[phi, imgs[k]]).all() for k, s in enumerate(gens)):
            maps.append(phi)
    perms = [Perm(m.tolist(), check=False) for m in maps]
    chosen: list[Perm] = []
    for p in perms:
        if p.is_identity():
            continue
        trial = PermGroup(chosen + [p], degree=n)
        if not chosen or trial.order() > PermGroup(chosen, degree=n).order():
            chosen.append(p)
        if PermGroup(chosen, degree=n).order() == len(maps):
            break
    return Automorphisms(maps, PermGroup(chosen, degree=n, name=f"Aut({A.name or '?'})"))


# ---------------------------------------------------------------- maximal subgroups


def _conj_closure(D: DenseGroup, family: set[int]) -> set[int]:
    out: set[int] = set()
    for b in family:
        if b not in out:
            out.update(D.conjugacy_orbit_bits(b))
    return out


def _embed(D: DenseGroup, sub: PermGroup) -> np.ndarray:
    """Map from sub's dense ids to D's ids (sub is a subgroup of D's group)."""
    S = sub.dense()
    return np.array([D.index_of_array(S.E[i]) for i in range(S.n)], dtype=np.int64)


def _minimal_normal_in(D: DenseGroup, nmask: np.ndarray) -> np.ndarray:
    """A minimal normal subgroup of the subgroup N (normal in N, not in G)."""
    maps = [D.conj_map(int(g)) for g in D.small_generators(nmask)]

    def n_class(x: int) -> np.ndarray:
        cls = np.zeros(D.n, dtype=bool)
        cls[x] = True
        frontier = np.array([x])
        while frontier.size:
            new = np.unique(np.concatenate([m[frontier] for m in maps]))
            new = new[~cls[new]]
            cls[new] = True
            frontier = new
        return cls

    reps, seen = [], np.zeros(D.n, dtype=bool)
    for x in np.flatnonzero(nmask)[1:]:
        if not seen[x]:
            reps.append(int(x))
            seen |= n_class(int(x))
    best = nmask
    changed = True
    while changed:
        changed = False
        for x in reps:
            if not best[x]:
                continue
            cand = D.closure(np.flatnonzero(n_class(x)))
            if cand.sum() < best.sum():
                best, changed = cand, True
                break
    return best


def _set_partitions_equal(k: int) -> list[list[tuple[int, ...]]]:
    """Partitions of range(k) into blocks of one common size >= 2."""
    out = []
    for size in range(2, k + 1):
        if k % size:
            continue

        def rec(rest):
            if not rest:
                yield []
                return
            first = rest[0]
            for others in itertools.combinations(rest[1:], size - 1):
                block = (first,) + others
                remaining = [r for r in rest if r not in block]
                for tail in rec(remaining):
                    yield [block] + tail

        out.extend(rec(list(range(k))))
    return out


def _maximal_supplements(D: DenseGroup, nmask: np.ndarray, aut_bound: int) -> set[int]:
    """Maximal subgroups of G not containing the minimal normal subgroup N."""
    n = D.n
    T = D.table
    nbits = D.to_bits(nmask)
    nsize = int(nmask.sum())
    cands: set[int] = set(complements(D, nmask))
    if not is_abelian_bits(D, nbits):
        t1 = _minimal_normal_in(D, nmask)
        t1bits = D.to_bits(t1)
        # components T_i = T_1^{t_i}
        comps = {t1bits: 0}
        transport = [0]
        order = [t1bits]
        for b in order:
            bmask = D.to_mask(b)
            for g in D.gen_ids:
                c = D.to_bits(D.conjugate_mask(bmask, g))
                if c not in comps:
                    comps[c] = len(order)
                    order.append(c)
                    transport.append(int(T[transport[comps[b]], g]))
        k = len(order)
        conj_t = [D.conj_map(t) for t in transport]
        T1 = D.subgroup(t1, name="T1")
        emb = _embed(D, T1)
        # automorphisms of T1 induced by N_G(T1), modulo inner ones
        norm = D.normalizer(t1)
        inner = D.closure(np.flatnonzero(D.centralizer(D.small_generators(t1))), start=t1)
        outer_reps = []
        covered = np.zeros(n, dtype=bool)
        for h in np.flatnonzero(norm):
            if covered[h]:
                continue
            outer_reps.append(int(h))
            covered[T[np.flatnonzero(inner), h]] = True
        sublat = full_lattice(T1, COMPONENT_LATTICE_BOUND)
        TD = T1.dense()
        for cls in sublat.classes:
            if cls.order in (1, TD.n):
                continue
            rmask_t = TD.to_mask(cls.rep)
            rids = emb[np.flatnonzero(rmask_t)]
            for choice in itertools.product(outer_reps, repeat=k - 1):
                parts = [rids]
                for comp, a in enumerate(choice, start=1):
                    parts.append(conj_t[comp][D.conj_map(a)[rids]])
                W = D.closure(np.concatenate(parts))
                cands.add(D.to_bits(D.normalizer(W)))
        if k >= 2:
            auts = automorphism_group(T1, aut_bound)
            aut_reps = _outer_representatives(TD, auts.maps)
            tgens = [int(x) for x in TD.small_generators(np.ones(TD.n, dtype=bool))]
            for partition in _set_partitions_equal(k):
                per_block = []
                for block in partition:
                    options = []
                    for alphas in itertools.product(aut_reps, repeat=len(block) - 1):
                        gens = []
                        for x in tgens:
                            elt = 0
                            images = [x] + [int(a[x]) for a in alphas]
                            for comp, y in zip(block, images):
                                elt = int(T[elt, conj_t[comp][emb[y]]])
                            gens.append(elt)
                        options.append(gens)
                    per_block.append(options)
                for combo in itertools.product(*per_block):
                    U = D.closure([g for gens in combo for g in gens])
                    cands.add(D.to_bits(D.normalizer(U)))
    full = D.full_bits

    def supplements(b: int) -> bool:
        return b != full and _popcount(b) * nsize // _popcount(b & nbits) == n

    cands = {b for b in _conj_closure(D, cands) if supplements(b)}
    ordered = sorted(cands, key=_popcount, reverse=True)
    maximal = set()
    for b in ordered:
        if not any(b & m == b for m in maximal):
            # anything strictly larger was seen earlier and is contained in some maximal one
            maximal.add(b)
    return maximal


def _outer_representatives(TD: DenseGroup, maps: list[np.ndarray]) -> list[np.ndarray]:
    """One automorphism from each coset of the inner automorphisms."""
    inner = [TD.conj_map(x) for x in range(TD.n)]
    covered: set[bytes] = set()
    reps = []
    for phi in maps:
        if phi.tobytes() in covered:
            continue
        reps.append(phi)
        covered.update(c[phi].tobytes() for c in inner)
    return reps


def maximal_subgroups(G: PermGroup, aut_bound: int = AUTOMORPHISM_BOUND) -> list[int]:
    """All maximal subgroups of G (every conjugate), as sorted bitsets."""
    cache = G.__dict__.setdefault("_lattice_cache", {})
    if "maximal" in cache:
        return cache["maximal"]
    D = G.dense()
    if D.n == 1:
        cache["maximal"] = []
        return []
    n0 = D.to_mask(minimal_normal_subgroups(G)[0])
    result = set(_maximal_supplements(D, n0, aut_bound))
    if not n0.all():
        Q = quotient_by_normal(G, n0)
        for mb in maximal_subgroups(Q.group, aut_bound):
            qmask = Q.group.dense().to_mask(mb)
            result.add(D.to_bits(qmask[Q.projection]))
    out = sorted(result)
    cache["maximal"] = out
    return out


def frattini(G: PermGroup) -> int:
    acc = G.dense().full_bits
    for m in maximal_subgroups(G):
        acc &= m
    return acc


def is_frattini_factor(G: PermGroup, H: int, K: int) -> bool:
    """Whether H/K lies in the Frattini subgroup of G/K (H, K normal, K <= H)."""
    return all(m & H == H for m in maximal_subgroups(G) if m & K == K)


# ---------------------------------------------------------------- supplements engine


def mobius_supplements(G: PermGroup, N: int | np.ndarray | PermGroup, above: int | None = None) -> SubgroupLattice:
    """Moebius values on intersections of maximal supplements of N.

    With ``above`` = K (normal, K <= N), only subgroups containing K are used;
    this is the lattice of G/K in disguise, since mu_{G/K}(H/K) = mu_G(H).
    """
    D = G.dense()
    if isinstance(N, PermGroup):
        nmask = _mask_of(G, N)
    elif isinstance(N, np.ndarray):
        nmask = N
    else:
        nmask = D.to_mask(N)
    if not D.is_normal(nmask):
        raise ValueError("N must be normal")
    nbits = D.to_bits(nmask)
    nsize = _popcount(nbits)
    n = D.n

    def is_supplement(b: int) -> bool:
        return _popcount(b) * nsize == n * _popcount(b & nbits)

    maxs = [m for m in maximal_subgroups(G) if m & nbits != nbits]
    if above is not None:
        maxs = [m for m in maxs if m & above == above]
    family = set(maxs)
    queue = list(maxs)
    for a in queue:
        for m in maxs:
            c = a & m
            if c not in family and is_supplement(c):
                family.add(c)
                queue.append(c)
    family.add(D.full_bits)
    classes = _classes_from_family(D, family)
    inclusion = _mobius(D, classes)
    return SubgroupLattice(G, classes, inclusion, mode="supplements", normal=nbits, above=above)


def supplement_polynomial(G: PermGroup, N, above: int | None = None) -> DirichletPoly:
    """sum over supplements H of N of mu(H)/|G:H|^s (only H containing ``above`` if given)."""
    return mobius_supplements(G, N, above).polynomial()


def hall_check(L: SubgroupLattice) -> list[int]:
    """Classes with nonzero mu whose representative is not an intersection of maximal subgroups."""
    maxs = maximal_subgroups(L.group)
    bad = []
    for i, c in enumerate(L.classes):
        if not c.mu or c.order == L.dense.n:
            continue
        acc = L.dense.full_bits
        for m in maxs:
            if m & c.rep == c.rep:
                acc &= m
        if acc != c.rep:
            bad.append(i)
    return bad
