"""Probabilistic zeta functions of finite groups.

P_G(s) = sum_H mu_G(H) / |G:H|^s, and its relative version P_{G,N}(s) which
only keeps supplements H of N (HN = G).  Along a chief series the relative
versions multiply back to P_G; Frattini chief factors contribute 1.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dirichlet import DirichletPoly, evaluate, project, shift
from .lattice import (
    FULL_LATTICE_BOUND,
    _minimal_normal_in,
    automorphism_group,
    chief_series,
    complements,
    full_lattice,
    is_abelian_bits,
    is_frattini_factor,
    maximal_subgroups,
    minimal_normal_subgroups,
    mobius_supplements,
)
from .numtheory import factorize, prime_divisors
from .permgroup import DenseGroup, Perm, PermGroup, SizeRefusal, quotient_by_normal

EXACT_ENUMERATION_LIMIT = 10**8

# simple groups by order, for naming nonabelian chief factors
SIMPLE_NAMES = {
    60: "Alt(5)",
    168: "PSL(2,7)",
    360: "Alt(6)",
    504: "PSL(2,8)",
    660: "PSL(2,11)",
    1092: "PSL(2,13)",
    2448: "PSL(2,17)",
    2520: "Alt(7)",
    3420: "PSL(2,19)",
    4080: "PSL(2,16)",
    5616: "PSL(3,3)",
    6048: "PSU(3,3)",
    6072: "PSL(2,23)",
    7800: "PSL(2,25)",
    7920: "M11",
}


def _bits_of(G: PermGroup, N) -> int:
    D = G.dense()
    if isinstance(N, PermGroup):
        return D.to_bits(D.closure([D.index(g) for g in N.generators]))
    if isinstance(N, np.ndarray):
        return D.to_bits(N)
    return int(N)


def p_g(G: PermGroup, engine: str = "auto", bound: int = FULL_LATTICE_BOUND) -> DirichletPoly:
    """P_G(s).  ``engine`` is "full", "supplements" or "auto" (full when small enough)."""
    n = G.order()
    if n == 1:
        return DirichletPoly.one()
    if engine == "auto":
        engine = "full" if n <= bound else "supplements"
    if engine == "full":
        return full_lattice(G, bound).polynomial()
    if engine == "supplements":
        return mobius_supplements(G, G.dense().full_bits).polynomial()
    raise ValueError(f"unknown engine {engine!r}")


def p_gn(G: PermGroup, N) -> DirichletPoly:
    """P_{G,N}(s): Moebius sum over the supplements of the normal subgroup N."""
    D = G.dense()
    nbits = _bits_of(G, N)
    if not D.is_normal(D.to_mask(nbits)):
        raise ValueError("N is not normal in G")
    if nbits == 1:
        return DirichletPoly.one()
    return mobius_supplements(G, nbits).polynomial()


# ---------------------------------------------------------------- chief factors


@dataclass
class ChiefFactor:
    descriptor: str  # "C3", "C2^2", "Alt(5)", "Alt(5)^2", ...
    order: int
    abelian: bool
    frattini: bool
    poly: DirichletPoly | None  # None for Frattini factors
    upper: int = field(repr=False, default=0)  # bitsets H > K with H/K the factor
    lower: int = field(repr=False, default=0)

    def to_dict(self) -> dict:
        return {
            "factor": self.descriptor,
            "frattini": self.frattini,
            "poly": self.poly.to_records() if self.poly is not None else None,
        }


@dataclass
class ChiefFactorization:
    group: PermGroup
    factors: list[ChiefFactor]
    product: DirichletPoly
    p_g: DirichletPoly

    @property
    def verified(self) -> bool:
        return self.product == self.p_g

    def non_frattini(self) -> list[str]:
        return sorted(f.descriptor for f in self.factors if not f.frattini)

    def to_dict(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.order(),
            "factors": [f.to_dict() for f in self.factors],
            "product": self.product.to_records(),
            "p_g": self.p_g.to_records(),
            "verified": self.verified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _describe_factor(G: PermGroup, H: int, K: int) -> tuple[str, bool]:
    D = G.dense()
    order = H.bit_count() // K.bit_count()
    if is_abelian_modulo(D, H, K):
        (p, d), = factorize(order).pairs
        return (f"C{p}" if d == 1 else f"C{p}^{d}"), True
    if K == 1:
        D2, hmask = D, D.to_mask(H)
    else:
        Q = quotient_by_normal(G, D.to_mask(K))
        D2 = Q.group.dense()
        hmask = np.zeros(D2.n, dtype=bool)
        hmask[Q.projection[D.ids(H)]] = True
    t = int(_minimal_normal_in(D2, hmask).sum())
    k = round(math.log(order) / math.log(t))
    name = SIMPLE_NAMES.get(t, f"S[{t}]")
    return (name if k == 1 else f"{name}^{k}"), False


def is_abelian_modulo(D: DenseGroup, H: int, K: int) -> bool:
    """Whether H/K is abelian, i.e. all commutators of generators of H lie in K."""
    T, inv = D.table, D.inv
    gens = D.small_generators(D.to_mask(H))
    kmask = D.to_mask(K)
    for a, b in itertools.combinations(gens, 2):
        comm = T[T[inv[a], inv[b]], T[a, b]]
        if not kmask[comm]:
            return False
    return True


def chief_factorization(G: PermGroup) -> ChiefFactorization:
    series = chief_series(G)
    factors = []
    product = DirichletPoly.one()
    for H, K in zip(series, series[1:]):
        desc, abelian = _describe_factor(G, H, K)
        fratt = is_frattini_factor(G, H, K)
        poly = None
        if not fratt:
            # P_{G/K, H/K} read off the subgroups of G containing K
            poly = mobius_supplements(G, H, above=K if K != 1 else None).polynomial()
            product = product * poly
        factors.append(ChiefFactor(desc, H.bit_count() // K.bit_count(), abelian, fratt, poly, H, K))
    return ChiefFactorization(G, factors, product, p_g(G))


# ---------------------------------------------------------------- monolithic groups


@dataclass
class MonolithicData:
    L: PermGroup
    A: int  # bitset of the socle inside L
    abelian: bool
    simple_order: int  # |S_A|, or p for abelian A = C_p^d
    n: int  # multiplicity: |A| = simple_order^n
    source: PermGroup  # G and the minimal normal subgroup it came from
    source_A: int
    c: int | None = None  # complements of A in L_A (abelian case)
    X: PermGroup | None = None  # almost simple group on the elements of a component
    S: int | None = None  # bitset of the socle of X
    _gamma: int | None = field(default=None, repr=False)
    _q: int | None = field(default=None, repr=False)

    @property
    def order_A(self) -> int:
        return self.A.bit_count()

    @property
    def q(self) -> int:
        if self._q is None:
            self._q = _endomorphism_count(self) if self.abelian else 1
        return self._q

    @property
    def gamma(self) -> int:
        if self._gamma is None:
            self._gamma = _gamma(self)
        return self._gamma

    def p_la(self) -> DirichletPoly:
        """P_{L_A, A}(s)."""
        if self.abelian:
            return DirichletPoly({1: 1, self.order_A: -self.c})
        return p_gn(self.L, self.A)


def _action_on(D: DenseGroup, amask: np.ndarray, g: int, local: dict[int, int]) -> np.ndarray:
    """Conjugation by g on the elements of A, in A's local numbering."""
    ids = np.flatnonzero(amask)
    img = D.conj_map(g)[ids]
    return np.array([local[int(x)] for x in img], dtype=np.int64)


def monolithic(G: PermGroup, A) -> MonolithicData:
    """The monolithic primitive group L_A attached to a minimal normal subgroup A."""
    D = G.dense()
    abits = _bits_of(G, A)
    if abits not in minimal_normal_subgroups(G):
        raise ValueError("A is not a minimal normal subgroup")
    amask = D.to_mask(abits)
    aids = np.flatnonzero(amask)
    order = aids.size
    local = {int(x): i for i, x in enumerate(aids)}
    if is_abelian_bits(D, abits):
        (p, d), = factorize(order).pairs
        # affine group on A: translations by A, conjugation by G
        T = D.table
        gens = [Perm([local[int(T[x, a])] for x in aids]) for a in D.small_generators(amask)]
        gens += [Perm(_action_on(D, amask, g, local).tolist()) for g in D.gen_ids]
        L = PermGroup([g for g in gens if not g.is_identity()], degree=order, name=f"L[{G.name}]")
        LD = L.dense()
        tmask = LD.closure([LD.index(g) for g in gens[: len(D.small_generators(amask))]])
        c = len(complements(LD, tmask))
        return MonolithicData(L, LD.to_bits(tmask), True, p, d, G, abits, c=c)
    cent = D.centralizer(D.small_generators(amask))
    if cent.sum() == 1:
        L, lbits = G, abits
    else:
        Q = quotient_by_normal(G, cent, name=f"L[{G.name}]")
        L = Q.group
        LD = L.dense()
        lmask = np.zeros(LD.n, dtype=bool)
        lmask[Q.projection[aids]] = True
        lbits = LD.to_bits(lmask)
    # X_A: automorphisms of one component induced by its normalizer
    t1 = _minimal_normal_in(D, amask)
    t1ids = np.flatnonzero(t1)
    tloc = {int(x): i for i, x in enumerate(t1ids)}
    norm = D.normalizer(t1)
    xgens = [Perm(_action_on(D, t1, int(g), tloc).tolist()) for g in D.small_generators(norm)]
    X = PermGroup([g for g in xgens if not g.is_identity()], degree=t1ids.size, name=f"X[{G.name}]")
    XD = X.dense()
    sgens = [Perm(_action_on(D, t1, int(g), tloc).tolist()) for g in D.small_generators(t1)]
    smask = XD.closure([XD.index(g) for g in sgens])
    k = round(math.log(order) / math.log(t1ids.size))
    return MonolithicData(L, lbits, False, int(t1ids.size), k, G, abits, X=X, S=XD.to_bits(smask))


def _local_group(M: MonolithicData) -> tuple[PermGroup, list[np.ndarray]]:
    """A as an abstract permutation group on its own elements, plus the L_A action."""
    D = M.L.dense()
    amask = D.to_mask(M.A)
    aids = np.flatnonzero(amask)
    local = {int(x): i for i, x in enumerate(aids)}
    T = D.table
    regular = [Perm([local[int(T[x, a])] for x in aids]) for a in D.small_generators(amask)]
    A = PermGroup(regular, degree=aids.size, name="A")
    actions = [_action_on(D, amask, g, local) for g in D.gen_ids]
    return A, actions


def _endomorphism_count(M: MonolithicData) -> int:
    """|End_{L_A}(A)| for elementary abelian A, by brute force over basis images."""
    D = M.L.dense()
    amask = D.to_mask(M.A)
    aids = np.flatnonzero(amask)
    T = D.table
    basis = [int(b) for b in D.small_generators(amask)]
    if aids.size ** len(basis) > 10**6:
        raise SizeRefusal("endomorphism search too large")
    p = M.simple_order
    # coordinates of every element of A in the basis
    coords = {}
    for vec in itertools.product(range(p), repeat=len(basis)):
        x = 0
        for b, e in zip(basis, vec):
            for _ in range(e):
                x = int(T[x, b])
        coords[vec] = x
    actions = [D.conj_map(g) for g in D.gen_ids]
    count = 0
    for images in itertools.product(aids.tolist(), repeat=len(basis)):
        phi = {}
        for vec, x in coords.items():
            y = 0
            for im, e in zip(images, vec):
                for _ in range(e):
                    y = int(T[y, im])
            phi[x] = y
        if all(phi[int(c[x])] == int(c[phi[x]]) for c in actions for x in phi):
            count += 1
    return count


def _gamma(M: MonolithicData) -> int:
    """gamma_A, the crown correction constant.

    Nonabelian A: automorphisms of A whose class modulo Inn(A) commutes with the
    image of L_A in Out(A).  Abelian A: c(A) times the units of End_{L_A}(A),
    i.e. c(A) * |C_{Aut A}(L_A/A)|.
    """
    if M.abelian:
        return M.c * (M.q - 1)
    A, actions = _local_group(M)
    auts = automorphism_group(A)
    AD = A.dense()
    inner = {AD.conj_map(x).tobytes() for x in range(AD.n)}
    # actions are on points of the regular representation; move them to dense ids
    to_dense = np.array([AD.index(_regular_perm(A, i)) for i in range(AD.degree)], dtype=np.int64)
    from_dense = np.argsort(to_dense)
    acts = [to_dense[a[from_dense]] for a in actions]
    count = 0
    for phi in auts.maps:
        phi_inv = np.argsort(phi)
        # [phi, c] = phi^-1 c^-1 phi c must be inner for each action c
        if all(c[phi[np.argsort(c)[phi_inv]]].tobytes() in inner for c in acts):
            count += 1
    return count


def _regular_perm(A: PermGroup, i: int) -> Perm:
    """The element of the regular group A that sends point 0 to point i."""
    D = A.dense()
    col = D.E[:, 0]
    j = int(np.flatnonzero(col == i)[0])
    return D.perm(j)


def tilde_p(M: MonolithicData, i: int) -> DirichletPoly:
    if i < 1:
        raise ValueError("tilde_p needs i >= 1")
    base = M.p_la()
    if i == 1:
        return base
    weight = sum(M.q**j for j in range(i - 1))
    return base - DirichletPoly({M.order_A: weight * M.gamma})


def match_tilde_index(M: MonolithicData, target: DirichletPoly, max_i: int = 8) -> int | None:
    """The i with tilde_p(M, i) == target, if any."""
    for i in range(1, max_i + 1):
        if tilde_p(M, i) == target:
            return i
    return None


# ---------------------------------------------------------------- Seral identity


@dataclass
class SeralRow:
    r: int
    left: DirichletPoly
    right: DirichletPoly
    equal: bool
    unshifted_equal: bool


@dataclass
class SeralReport:
    n: int
    simple_order: int
    p_l: DirichletPoly
    p_x: DirichletPoly
    rows: list[SeralRow]

    @property
    def holds(self) -> bool:
        return all(r.equal for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "simple_order": self.simple_order,
            "P_L_soc": self.p_l.to_records(),
            "P_X_S": self.p_x.to_records(),
            "rows": [
                {"r": r.r, "left": r.left.to_records(), "right": r.right.to_records(), "equal": r.equal}
                for r in self.rows
            ],
            "holds": self.holds,
        }


def socle(G: PermGroup) -> int:
    acc = 1
    D = G.dense()
    for b in minimal_normal_subgroups(G):
        acc = D.to_bits(D.closure(D.ids(b), start=D.to_mask(acc)))
    return acc


def seral_check(L: PermGroup) -> SeralReport:
    """Compare P_{L,soc}^(r) with P_{X,S}^(r)(ns - n + 1) for every prime r dividing |S|."""
    mins = minimal_normal_subgroups(L)
    if len(mins) != 1:
        raise ValueError("L is not monolithic")
    M = monolithic(L, mins[0])
    if M.abelian:
        raise ValueError("the socle of L is abelian")
    left_full = p_gn(L, mins[0])
    right_full = p_gn(M.X, M.S)
    shifted = shift(right_full, M.n)
    rows = []
    for r in prime_divisors(M.simple_order):
        left = project(left_full, [r])
        right = project(shifted, [r])
        rows.append(SeralRow(r, left, right, left == right, left == project(right_full, [r])))
    return SeralReport(M.n, M.simple_order, left_full, right_full, rows)


# ---------------------------------------------------------------- generation probability


def _count_generating(D: DenseGroup, k: int) -> int:
    """Number of k-tuples generating the group, by recursion on the generated subgroup."""
    n = D.n
    memo: dict[tuple[int, int], int] = {}

    def count(bits: int, left: int) -> int:
        if bits == D.full_bits:
            return n**left
        if left == 0:
            return 0
        key = (bits, left)
        if key in memo:
            return memo[key]
        mask = D.to_mask(bits)
        inside = int(mask.sum())
        total = inside * count(bits, left - 1)
        seen: dict[int, int] = {}
        for y in np.flatnonzero(~mask):
            b = D.to_bits(D.closure([int(y)], start=mask))
            seen[b] = seen.get(b, 0) + 1
        for b, mult in seen.items():
            total += mult * count(b, left - 1)
        memo[key] = total
        return total

    return count(1, k)


@dataclass
class MonteCarloResult:
    estimate: float
    stderr: float
    hits: int
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def generation_probability(
    G: PermGroup,
    k: int,
    mode: str = "exact",
    samples: int = 10**5,
    seed: int = 0,
    chunks: int = 8,
    threads: int = 1,
):
    """Probability that k uniform random elements generate G.

    Exact mode returns a Fraction; monte-carlo mode returns a MonteCarloResult.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    D = G.dense()
    n = D.n
    if mode == "exact":
        if n**k > EXACT_ENUMERATION_LIMIT:
            raise SizeRefusal(f"|G|^k = {n**k} exceeds {EXACT_ENUMERATION_LIMIT}")
        return Fraction(_count_generating(D, k), n**k)
    if mode != "monte-carlo":
        raise ValueError(f"unknown mode {mode!r}")
    canon = _Canonicalizer(D)
    streams = np.random.SeedSequence(seed).spawn(chunks)
    sizes = [samples // chunks + (1 if i < samples % chunks else 0) for i in range(chunks)]

    def run(i: int) -> int:
        rng = np.random.default_rng(streams[i])
        tuples = np.stack([D.random_ids(rng, sizes[i]) for _ in range(k)], axis=1)
        return canon.count_generating(tuples)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            hits = sum(pool.map(run, range(chunks)))
    else:
        hits = sum(run(i) for i in range(chunks))
    est = hits / samples
    return MonteCarloResult(est, math.sqrt(est * (1 - est) / samples), hits, samples, seed)


class _Canonicalizer:
    """Tests generation of many tuples, conjugating each so its first entry is a class representative."""

    def __init__(self, D: DenseGroup):
        self.D = D
        T = D.table
        rep = np.full(D.n, -1, dtype=np.int64)
        conj = np.zeros(D.n, dtype=np.int64)  # conj[x] = g with g^-1 x g = rep[x]
        inv = D.inv
        for r in D.class_representatives:
            rep[r] = r
            frontier = [r]
            while frontier:
                nxt = []
                for x in frontier:
                    for s in D.gen_ids:
                        y = int(T[T[inv[s], x], s])  # y = s^-1 x s, so x = s y s^-1
                        if rep[y] < 0:
                            rep[y] = r
                            conj[y] = int(T[inv[s], conj[x]])
                            nxt.append(y)
                frontier = nxt
        self.rep, self.conj = rep, conj
        self.cache: dict[bytes, bool] = {}

    def count_generating(self, tuples: np.ndarray) -> int:
        D = self.D
        T, inv = D.table, D.inv
        g = self.conj[tuples[:, 0]]
        moved = T[T[inv[g][:, None], tuples], g[:, None]].astype(np.int64)
        keys, counts = np.unique(moved, axis=0, return_counts=True)
        hits = 0
        for row, c in zip(keys, counts):
            key = row.tobytes()
            ok = self.cache.get(key)
            if ok is None:
                ok = bool(D.closure(row.tolist()).all())
                self.cache[key] = ok
            if ok:
                hits += int(c)
        return hits


# ---------------------------------------------------------------- supplement index, comparison


def min_supplement_index(X: PermGroup, S=None) -> int | float:
    """Least index of a proper subgroup H of X with HS = X (math.inf if only X)."""
    D = X.dense()
    sbits = D.full_bits if S is None else _bits_of(X, S)
    if not D.is_normal(D.to_mask(sbits)):
        raise ValueError("S is not normal in X")
    idx = [D.n // m.bit_count() for m in maximal_subgroups(X) if m & sbits != sbits]
    return min(idx) if idx else math.inf


@dataclass
class Comparison:
    poly_g: DirichletPoly
    poly_h: DirichletPoly
    factors_g: list[str]
    factors_h: list[str]
    # (descriptor, factor polynomial) for each non-Frattini chief factor
    data_g: list[tuple[str, DirichletPoly]] = field(default_factory=list)
    data_h: list[tuple[str, DirichletPoly]] = field(default_factory=list)

    @property
    def polys_equal(self) -> bool:
        return self.poly_g == self.poly_h

    @property
    def factors_equal(self) -> bool:
        """Same non-Frattini chief factors up to isomorphism, with multiplicity."""
        return Counter(self.factors_g) == Counter(self.factors_h)

    @property
    def factor_data_equal(self) -> bool:
        """Same factors together with the same factor polynomials (so the same action)."""
        return Counter(self.data_g) == Counter(self.data_h)

    def summary(self) -> str:
        p = "P equal" if self.polys_equal else "P differ"
        f = "chief factors equal" if self.factors_equal else "chief factors differ"
        shown = "{" + ", ".join(self.factors_g) + "}"
        if not self.factors_equal:
            shown += " vs {" + ", ".join(self.factors_h) + "}"
        return f"{p}; {f}: {shown}"

    def to_dict(self) -> dict:
        return {
            "P_G": self.poly_g.to_records(),
            "P_H": self.poly_h.to_records(),
            "polys_equal": self.polys_equal,
            "factors_G": self.factors_g,
            "factors_H": self.factors_h,
            "factors_equal": self.factors_equal,
            "factor_data_equal": self.factor_data_equal,
        }


def compare_groups(G: PermGroup, H: PermGroup) -> Comparison:
    fg, fh = chief_factorization(G), chief_factorization(H)

    def data(F: ChiefFactorization) -> list[tuple[str, DirichletPoly]]:
        return sorted(((f.descriptor, f.poly) for f in F.factors if not f.frattini), key=lambda t: (t[0], str(t[1])))

    return Comparison(fg.p_g, fh.p_g, fg.non_frattini(), fh.non_frattini(), data(fg), data(fh))


def evaluate_at(G: PermGroup, k: int) -> Fraction:
    return evaluate(p_g(G), k)
