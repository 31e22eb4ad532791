"""Permutation groups: stabilizer chains, dense element tables, constructions.

Permutations act on the right: ``(a * b)[i] == b[a[i]]``, so ``a * b`` means
"first a, then b", and ``x ** g`` style conjugation is ``g**-1 * x * g``.

Two representations coexist.  ``PermGroup`` carries generators and a
deterministic Schreier-Sims chain (order, membership, uniform sampling).  For
groups up to ``DENSE_LIMIT`` elements, ``PermGroup.dense()`` enumerates all
elements, interns them to integer ids (identity is id 0) and builds the full
multiplication table; subgroups are then boolean masks or int bitsets over ids.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .numtheory import is_prime

DENSE_LIMIT = 20000


class SizeRefusal(RuntimeError):
    """Raised when a computation is refused because the group is too large."""


class Perm:
    """A permutation of {0, ..., d-1} given by its image list."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        self.images = tuple(int(i) for i in images)
        if check and sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(range(degree), check=False)

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Perm:
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        o = other.images
        return Perm((o[i] for i in self.images), check=False)

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv, check=False)

    def __pow__(self, k: int) -> Perm:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Perm.identity(self.degree), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            base = base * base
        return out

    def conjugate(self, g: Perm) -> Perm:
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        seen, out = set(), 1
        for i in range(len(self.images)):
            if i in seen:
                continue
            n, j = 0, i
            while j not in seen:
                seen.add(j)
                j = self.images[j]
                n += 1
            out = lcm(out, n)
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self):
        cyc = "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())
        return f"Perm<{self.degree}>{cyc or '()'}"


def _first_moved(p: Perm) -> int | None:
    for i, j in enumerate(p.images):
        if i != j:
            return i
    return None


@dataclass
class _Level:
    base: int
    gens: list[Perm] = field(default_factory=list)
    transversal: dict[int, Perm] = field(default_factory=dict)


class StabilizerChain:
    """Deterministic Schreier-Sims chain.

    Base points are chosen as the smallest point moved by the element that
    forces a new level; generator order is respected, so the chain is a pure
    function of the generator list.
    """

    def __init__(self, generators: Sequence[Perm], degree: int):
        self.degree = degree
        self.levels: list[_Level] = []
        self._identity = Perm.identity(degree)
        for g in generators:
            self._absorb(g)
        self._complete()

    def _strong_gens(self, i: int) -> list[Perm]:
        return [g for lvl in self.levels[i:] for g in lvl.gens]

    def _orbit(self, i: int) -> None:
        lvl = self.levels[i]
        gens = self._strong_gens(i)
        trans = {lvl.base: self._identity}
        queue = [lvl.base]
        for pt in queue:
            u = trans[pt]
            for g in gens:
                q = g.images[pt]
                if q not in trans:
                    trans[q] = u * g
                    queue.append(q)
        lvl.transversal = trans

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            pt = g.images[lvl.base]
            u = lvl.transversal.get(pt)
            if u is None:
                return g, i
            g = g * u.inverse()
        return g, len(self.levels)

    def _add(self, h: Perm, level: int) -> None:
        if level == len(self.levels):
            self.levels.append(_Level(_first_moved(h)))
        self.levels[level].gens.append(h)
        for i in range(level, -1, -1):
            self._orbit(i)

    def _absorb(self, g: Perm) -> bool:
        h, level = self.sift(g)
        if h.is_identity():
            return False
        if level < len(self.levels) and h.images[self.levels[level].base] == self.levels[level].base:
            # h fixes this base point; it belongs deeper
            while level < len(self.levels) and h.images[self.levels[level].base] == self.levels[level].base:
                level += 1
        self._add(h, level)
        return True

    def _complete(self) -> None:
        changed = True
        while changed:
            changed = False
            for i in range(len(self.levels) - 1, -1, -1):
                lvl = self.levels[i]
                gens = self._strong_gens(i)
                for pt, u in list(lvl.transversal.items()):
                    for s in gens:
                        v = lvl.transversal[s.images[pt]]
                        sch = u * s * v.inverse()
                        h, level = self.sift(sch, i + 1)
                        if not h.is_identity():
                            while level < len(self.levels) and h.images[self.levels[level].base] == self.levels[level].base:
                                level += 1
                            self._add(h, level)
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    @property
    def strong_generators(self) -> list[Perm]:
        return self._strong_gens(0)

    def order(self) -> int:
        return prod(len(lvl.transversal) for lvl in self.levels)

    def contains(self, g: Perm) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self.sift(g)
        return h.is_identity()

    def random_element(self, rng: np.random.Generator) -> Perm:
        g = self._identity
        for lvl in reversed(self.levels):
            reps = list(lvl.transversal.values())
            g = g * reps[int(rng.integers(len(reps)))]
        return g


class PermGroup:
    """A permutation group given by generators."""

    def __init__(self, generators: Iterable[Perm | Sequence[int]], degree: int | None = None, name: str | None = None):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for an empty generator list")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError("generators must share one degree")
        self.degree = degree
        self.generators = [g for g in gens if not g.is_identity()]
        self.name = name

    def __repr__(self):
        label = self.name or f"<{len(self.generators)} gens>"
        return f"PermGroup({label}, degree={self.degree})"

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.generators, self.degree)

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, g: Perm) -> bool:
        return self.chain.contains(g)

    contains = __contains__

    def random_element(self, rng: np.random.Generator) -> Perm:
        return self.chain.random_element(rng)

    def is_trivial(self) -> bool:
        return not self.generators

    def dense(self) -> DenseGroup:
        if "_dense" not in self.__dict__:
            n = self.order()
            if n > DENSE_LIMIT:
                raise SizeRefusal(f"group of order {n} exceeds the dense limit {DENSE_LIMIT}")
            self.__dict__["_dense"] = DenseGroup(self)
        return self.__dict__["_dense"]

    def elements(self) -> list[Perm]:
        d = self.dense()
        return [d.perm(i) for i in range(d.n)]

    def fingerprint(self) -> str:
        """Hash of degree and generators, used to key cache files."""
        payload = json.dumps([self.degree, [list(g.images) for g in self.generators]])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # file format

    def to_dict(self) -> dict:
        out = {"degree": self.degree, "generators": [list(g.images) for g in self.generators]}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: dict) -> PermGroup:
        return cls([Perm(g) for g in data["generators"]], degree=data["degree"], name=data.get("name"))


class DenseGroup:
    """All elements of a permutation group, interned to ids, with a product table."""

    def __init__(self, group: PermGroup):
        self.group = group
        d = group.degree
        gens = [np.array(g.images, dtype=np.int32) for g in group.generators]
        ident = np.arange(d, dtype=np.int32)
        rows = [ident]
        index = {ident.tobytes(): 0}
        parent = [-1]
        via = [-1]
        right: list[dict[int, int]] = [{} for _ in gens]  # right[k][a] = id(a * gen_k)
        frontier = [0]
        while frontier:
            block = np.stack([rows[a] for a in frontier])
            nxt = []
            for k, g in enumerate(gens):
                prods = g[block]
                for a, row in zip(frontier, prods):
                    key = row.tobytes()
                    b = index.get(key)
                    if b is None:
                        b = len(rows)
                        index[key] = b
                        rows.append(row)
                        parent.append(a)
                        via.append(k)
                        nxt.append(b)
                    right[k][a] = b
            frontier = nxt
        self.n = len(rows)
        self.degree = d
        self.E = np.stack(rows)
        self._index = index
        self._parent = parent
        self._via = via
        self.right = [np.array([r[a] for a in range(len(rows))], dtype=np.int64) for r in right]
        self.gen_ids = [self.index_of_array(g) for g in gens]

    # element access

    def index_of_array(self, row: np.ndarray) -> int:
        return self._index[np.asarray(row, dtype=np.int32).tobytes()]

    def index(self, g: Perm) -> int:
        return self.index_of_array(np.array(g.images))

    def perm(self, i: int) -> Perm:
        return Perm(self.E[i].tolist(), check=False)

    @cached_property
    def table(self) -> np.ndarray:
        """table[a, b] = id(a * b)."""
        n = self.n
        dtype = np.int16 if n < 2**15 else np.int32
        cols = np.empty((n, n), dtype=dtype)  # cols[b] is column b
        cols[0] = np.arange(n)
        for b in range(1, n):
            cols[b] = self.right[self._via[b]][cols[self._parent[b]]]
        return np.ascontiguousarray(cols.T)

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmin(self.table, axis=1).astype(np.int64)

    @cached_property
    def element_orders(self) -> np.ndarray:
        T = self.table
        ids = np.arange(self.n)
        cur = ids.copy()
        order = np.zeros(self.n, dtype=np.int64)
        k = 1
        while (order == 0).any():
            hit = (cur == 0) & (order == 0)
            order[hit] = k
            cur = T[cur, ids]
            k += 1
        return order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def conj_map(self, g: int) -> np.ndarray:
        """Array c with c[x] = g^-1 x g."""
        T = self.table
        return T[T[self.inv[g], :], g].astype(np.int64)

    @cached_property
    def _gen_conj_maps(self) -> list[np.ndarray]:
        return [self.conj_map(g) for g in self.gen_ids]

    # bitsets

    def to_bits(self, mask: np.ndarray) -> int:
        return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")

    def to_mask(self, bits: int) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n].astype(bool)

    def ids(self, bits_or_mask) -> np.ndarray:
        mask = self.to_mask(bits_or_mask) if isinstance(bits_or_mask, int) else bits_or_mask
        return np.flatnonzero(mask)

    @property
    def full_bits(self) -> int:
        return (1 << self.n) - 1

    # subgroups

    def closure(self, gens: Iterable[int], start: np.ndarray | None = None, cap: int | None = None) -> np.ndarray | None:
        """Mask of the subgroup generated by ``gens`` (and ``start``).

        With ``cap`` set, returns None as soon as the subgroup exceeds cap elements.
        """
        T = self.table
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        gens = gens[gens != 0]
        if start is None:
            mask = np.zeros(self.n, dtype=bool)
            mask[0] = True
            frontier = np.array([0])
        else:
            mask = start.copy()
            gens = gens[~mask[gens]]
            if not gens.size:
                return mask
            gens = np.union1d(gens, self.small_generators(start))
            frontier = np.flatnonzero(mask)
        if not gens.size:
            return mask
        count = int(mask.sum())
        while frontier.size:
            new = T[frontier][:, gens].ravel().astype(np.int64)
            new = np.unique(new[~mask[new]])
            mask[new] = True
            count += new.size
            if cap is not None and count > cap:
                return None
            frontier = new
        return mask

    def small_generators(self, mask: np.ndarray) -> np.ndarray:
        """A short generating set of the subgroup given by ``mask``."""
        ids = np.flatnonzero(mask)
        if ids.size <= 1:
            return np.array([], dtype=np.int64)
        target = ids.size
        orders = self.element_orders
        # try large-order elements first: fewer generators in practice
        cand = ids[np.argsort(-orders[ids], kind="stable")]
        gens: list[int] = []
        cur = np.zeros(self.n, dtype=bool)
        cur[0] = True
        for x in cand:
            if cur[x]:
                continue
            gens.append(int(x))
            cur = self.closure(gens)
            if cur.sum() == target:
                break
        return np.array(gens, dtype=np.int64)

    def conjugate_mask(self, mask: np.ndarray, g: int) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.conj_map(g)[mask]] = True
        return out

    def normalizer(self, mask: np.ndarray) -> np.ndarray:
        """Mask of N_G(U) for U given by mask."""
        gens = self.small_generators(mask)
        if gens.size == 0:
            return np.ones(self.n, dtype=bool)
        T = self.table
        inv = self.inv
        ids = np.arange(self.n)
        ok = np.ones(self.n, dtype=bool)
        for x in gens:
            conj = T[T[inv, x], ids]  # g^-1 x g for every g
            ok &= mask[conj]
        return ok

    def centralizer(self, gens: Iterable[int]) -> np.ndarray:
        T = self.table
        ok = np.ones(self.n, dtype=bool)
        for x in gens:
            ok &= T[:, x] == T[x, :]
        return ok

    def conjugacy_class(self, x: int) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[x] = True
        frontier = np.array([x])
        while frontier.size:
            new = np.concatenate([c[frontier] for c in self._gen_conj_maps])
            new = np.unique(new[~mask[new]])
            mask[new] = True
            frontier = new
        return mask

    @cached_property
    def class_representatives(self) -> list[int]:
        seen = np.zeros(self.n, dtype=bool)
        reps = []
        for x in range(self.n):
            if not seen[x]:
                reps.append(x)
                seen |= self.conjugacy_class(x)
        return reps

    def normal_closure(self, mask_or_ids) -> np.ndarray:
        if isinstance(mask_or_ids, np.ndarray) and mask_or_ids.dtype == bool:
            ids = np.flatnonzero(mask_or_ids)
        else:
            ids = np.asarray(list(mask_or_ids), dtype=np.int64)
        union = np.zeros(self.n, dtype=bool)
        for x in ids:
            if not union[x]:
                union |= self.conjugacy_class(int(x))
        return self.closure(np.flatnonzero(union))

    def is_normal(self, mask: np.ndarray) -> bool:
        return all(mask[c[mask]].all() for c in self._gen_conj_maps)

    def subgroup(self, mask: np.ndarray, name: str | None = None) -> PermGroup:
        return PermGroup([self.perm(int(i)) for i in self.small_generators(mask)], degree=self.degree, name=name)

    def conjugate_bits_by_generators(self, bits: int) -> list[int]:
        mask = self.to_mask(bits)
        return [self.to_bits(self._scatter(c[mask])) for c in self._gen_conj_maps]

    def _scatter(self, ids: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[ids] = True
        return out

    def conjugacy_orbit_bits(self, bits: int) -> list[int]:
        """All G-conjugates of the subgroup with the given bitset, in discovery order."""
        seen = {bits: None}
        order = [bits]
        for b in order:
            for c in self.conjugate_bits_by_generators(b):
                if c not in seen:
                    seen[c] = None
                    order.append(c)
        return order

    def random_ids(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Uniform random element ids via independent transversal choices."""
        chain = self.group.chain
        out = np.zeros(size, dtype=np.int64)
        T = self.table
        for lvl in reversed(chain.levels):
            reps = np.array([self.index(u) for u in lvl.transversal.values()], dtype=np.int64)
            pick = reps[rng.integers(len(reps), size=size)]
            out = T[out, pick].astype(np.int64)
        return out


# ---------------------------------------------------------------- constructions


def trivial_group(degree: int = 1) -> PermGroup:
    return PermGroup([], degree=degree, name="1")


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    return PermGroup([Perm([(i + 1) % n for i in range(n)])], name=f"C({n})")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 3:
        raise ValueError("dihedral needs n >= 3")
    rot = Perm([(i + 1) % n for i in range(n)])
    ref = Perm([(-i) % n for i in range(n)])
    return PermGroup([rot, ref], name=f"Dih({n})")


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    if n == 2:
        return PermGroup([Perm([1, 0])], name="Sym(2)")
    return PermGroup([Perm.from_cycles(n, (0, 1)), Perm.from_cycles(n, tuple(range(n)))], name=f"Sym({n})")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return trivial_group(max(n, 1))
    three = Perm.from_cycles(n, (0, 1, 2))
    if n == 3:
        return PermGroup([three], name="Alt(3)")
    long = tuple(range(n)) if n % 2 else tuple(range(1, n))
    return PermGroup([three, Perm.from_cycles(n, long)], name=f"Alt({n})")


def quaternion() -> PermGroup:
    """Q8 in its regular representation."""
    # elements (sign, unit) with unit in 1, i, j, k -> index 4*(sign<0) + unit
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def right_mult(u: int) -> Perm:
        img = []
        for x in range(8):
            sx, ux = (-1 if x >= 4 else 1), x % 4
            s, w = table[(ux, u)]
            s *= sx
            img.append(w + (4 if s < 0 else 0))
        return Perm(img)

    return PermGroup([right_mult(1), right_mult(2)], name="Q8")


def _primitive_root(p: int) -> int:
    for w in range(2, p):
        if all(pow(w, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return w
    return 1


def _prime_factors(n: int) -> list[int]:
    from .numtheory import prime_divisors

    return list(prime_divisors(n))


def _mobius_perm(p: int, a: int, b: int, c: int, d: int) -> Perm:
    """z -> (a z + b) / (c z + d) on the projective line; infinity is point p."""
    inf = p
    img = []
    for z in range(p + 1):
        if z == inf:
            num, den = a, c
        else:
            num, den = (a * z + b) % p, (c * z + d) % p
        img.append(inf if den % p == 0 else (num * pow(den, -1, p)) % p)
    return Perm(img)


def _check_p(p: int) -> None:
    if not is_prime(p) or p < 5:
        raise ValueError(f"need a prime p >= 5, got {p}")


def psl2(p: int) -> PermGroup:
    _check_p(p)
    w = _primitive_root(p)
    gens = [_mobius_perm(p, 1, 1, 0, 1), _mobius_perm(p, w * w % p, 0, 0, 1), _mobius_perm(p, 0, p - 1, 1, 0)]
    return PermGroup(gens, name=f"PSL(2,{p})")


def pgl2(p: int) -> PermGroup:
    _check_p(p)
    w = _primitive_root(p)
    gens = [_mobius_perm(p, 1, 1, 0, 1), _mobius_perm(p, w, 0, 0, 1), _mobius_perm(p, 0, p - 1, 1, 0)]
    return PermGroup(gens, name=f"PGL(2,{p})")


def sl2(p: int) -> PermGroup:
    """SL(2,p) acting on the p^2 - 1 nonzero row vectors of F_p^2."""
    if not is_prime(p):
        raise ValueError(f"need a prime, got {p}")
    vecs = [(x, y) for x in range(p) for y in range(p) if (x, y) != (0, 0)]
    where = {v: i for i, v in enumerate(vecs)}

    def act(m):
        (a, b), (c, d) = m
        return Perm([where[((x * a + y * c) % p, (x * b + y * d) % p)] for x, y in vecs])

    return PermGroup([act(((1, 1), (0, 1))), act(((0, p - 1), (1, 0)))], name=f"SL(2,{p})")


def direct_product(*groups: PermGroup) -> PermGroup:
    degree = sum(g.degree for g in groups)
    gens = []
    offset = 0
    for g in groups:
        for h in g.generators:
            img = list(range(degree))
            for i, j in enumerate(h.images):
                img[offset + i] = offset + j
            gens.append(Perm(img))
        offset += g.degree
    name = " x ".join(g.name or "?" for g in groups)
    return PermGroup(gens, degree=degree, name=name)


def wreath_with_top(base: PermGroup, top: PermGroup) -> PermGroup:
    """base wr top in imprimitive action on top.degree blocks of size base.degree."""
    d, n = base.degree, top.degree
    degree = d * n
    gens = []
    for block in range(n):
        for h in base.generators:
            img = list(range(degree))
            for i, j in enumerate(h.images):
                img[block * d + i] = block * d + j
            gens.append(Perm(img))
    for t in top.generators:
        gens.append(Perm([t.images[i // d] * d + i % d for i in range(degree)]))
    return PermGroup(gens, degree=degree, name=f"{base.name or '?'} wr {top.name or '?'}")


def conjugate(H: PermGroup, g: Perm) -> PermGroup:
    return PermGroup([h.conjugate(g) for h in H.generators], degree=H.degree, name=H.name)


def subgroup_mask(G: PermGroup, H: PermGroup) -> np.ndarray:
    """Mask over G's element ids of a subgroup H of G."""
    D = G.dense()
    return D.closure([D.index(h) for h in H.generators])


def normal_closure(G: PermGroup, S: PermGroup | Iterable[Perm]) -> PermGroup:
    D = G.dense()
    gens = S.generators if isinstance(S, PermGroup) else list(S)
    return D.subgroup(D.normal_closure([D.index(s) for s in gens]))


def centralizer(G: PermGroup, A: PermGroup) -> PermGroup:
    D = G.dense()
    return D.subgroup(D.centralizer([D.index(a) for a in A.generators]))


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    D = G.dense()
    mask = subgroup_mask(G, H)
    out = mask.copy()
    for g in range(D.n):
        out &= D.conjugate_mask(mask, g)
    return D.subgroup(out)


@dataclass
class Quotient:
    """G/N realized as a permutation group on the cosets of N, with the projection."""

    group: PermGroup
    projection: np.ndarray  # projection[g] = id in group.dense() of the image of g
    coset_of: np.ndarray


def quotient_by_normal(G: PermGroup, N: PermGroup | np.ndarray, name: str | None = None) -> Quotient:
    """Regular action of G/N on the right cosets of N."""
    D = G.dense()
    nmask = N if isinstance(N, np.ndarray) else subgroup_mask(G, N)
    if not D.is_normal(nmask):
        raise ValueError("quotient_by_normal needs a normal subgroup")
    T = D.table
    nids = np.flatnonzero(nmask)
    coset_of = np.full(D.n, -1, dtype=np.int64)
    reps = []
    for g in range(D.n):
        if coset_of[g] < 0:
            coset_of[T[nids, g]] = len(reps)
            reps.append(g)
    reps = np.array(reps)
    k = len(reps)
    gens = []
    for g in D.gen_ids:
        gens.append(Perm(coset_of[T[reps, g]].tolist()))
    Q = PermGroup(gens, degree=k, name=name)
    if k == 1:
        return Quotient(Q, np.zeros(D.n, dtype=np.int64), coset_of)
    QD = Q.dense()
    rep_image = np.array([QD.index_of_array(coset_of[T[reps, r]].astype(np.int32)) for r in reps])
    return Quotient(Q, rep_image[coset_of], coset_of)


# ---------------------------------------------------------------- registry


def _parse_args(text: str) -> list[int]:
    return [int(x) for x in text.split(",")]


def _builtin_atom(name: str) -> PermGroup:
    name = name.strip()
    if name in ("Q8", "Q(8)"):
        return quaternion()
    if name in ("1", "Trivial"):
        return trivial_group()
    head, _, rest = name.partition("(")
    if not rest.endswith(")"):
        raise ValueError(f"unknown group {name!r}")
    args = _parse_args(rest[:-1])
    makers = {
        "C": lambda n: cyclic(n),
        "Dih": lambda n: dihedral(n),
        "Sym": lambda n: symmetric(n),
        "Alt": lambda n: alternating(n),
        "PSL": lambda two, p: psl2(p),
        "PGL": lambda two, p: pgl2(p),
        "SL": lambda two, p: sl2(p),
    }
    if head not in makers:
        raise ValueError(f"unknown group {name!r}")
    if head in ("PSL", "PGL", "SL") and args[0] != 2:
        raise ValueError("only 2-dimensional linear groups are built in")
    return makers[head](*args)


def builtin(name: str) -> PermGroup:
    """Registry lookup; products ``A x B`` and wreath products ``A wr T`` compose left to right."""
    tokens = name.replace(" wr ", " \0wr ").replace(" x ", " \0x ").split(" \0")
    group = _builtin_atom(tokens[0])
    for tok in tokens[1:]:
        op, _, rest = tok.partition(" ")
        other = _builtin_atom(rest)
        group = direct_product(group, other) if op == "x" else wreath_with_top(group, other)
    group.name = name
    return group


def load_group(spec: str) -> PermGroup:
    """``builtin:NAME`` or a path to a group JSON file."""
    if spec.startswith("builtin:"):
        return builtin(spec[len("builtin:") :])
    with open(spec) as fh:
        return PermGroup.from_dict(json.load(fh))
