import json
from collections import Counter

import numpy as np
import pytest
from scipy import stats
from sympy.combinatorics import Permutation, PermutationGroup

from probzeta.permgroup import (
    Perm,
    PermGroup,
    SizeRefusal,
    alternating,
    builtin,
    centralizer,
    conjugate,
    core,
    cyclic,
    dihedral,
    direct_product,
    load_group,
    normal_closure,
    pgl2,
    psl2,
    quaternion,
    quotient_by_normal,
    sl2,
    symmetric,
    wreath_with_top,
)

import oracles


def sympy_order(G: PermGroup) -> int:
    if not G.generators:
        return 1
    return PermutationGroup([Permutation(list(g.images)) for g in G.generators]).order()


def test_perm_basics():
    a = Perm.from_cycles(4, (0, 1, 2))
    b = Perm.from_cycles(4, (2, 3))
    assert (a * b).images == oracles.compose(a.images, b.images)
    assert a.order() == 3 and (a**3).is_identity()
    assert (a * a.inverse()).is_identity()
    assert a.cycles() == [(0, 1, 2)]
    with pytest.raises(ValueError):
        Perm([0, 0, 1])


@pytest.mark.parametrize(
    "name, order",
    [
        ("Alt(5)", 60),
        ("PSL(2,11)", 660),
        ("PSL(2,5)", 60),
        ("PGL(2,5)", 120),
        ("PGL(2,7)", 336),
        ("SL(2,3)", 24),
        ("SL(2,5)", 120),
        ("Sym(4)", 24),
        ("Dih(4)", 8),
        ("C(6)", 6),
        ("Q8", 8),
        ("Alt(5) x Alt(5)", 3600),
        ("Alt(5) wr Sym(2)", 7200),
        ("PSL(2,13)", 1092),
    ],
)
def test_orders_match_sympy(name, order):
    G = builtin(name)
    assert G.order() == order
    assert sympy_order(G) == order


def test_trivial_group():
    G = PermGroup([], degree=4)
    assert G.order() == 1 and G.is_trivial()
    with pytest.raises(ValueError):
        PermGroup([])


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        psl2(4)
    with pytest.raises(ValueError):
        pgl2(9)
    with pytest.raises(ValueError):
        PermGroup([Perm([1, 0]), Perm([1, 2, 0])])
    with pytest.raises(ValueError):
        builtin("Foo(3)")
    with pytest.raises(ValueError):
        builtin("PSL(3,5)")


def test_membership():
    A5, S5 = alternating(5), symmetric(5)
    rng = np.random.default_rng(1)
    gens = A5.generators
    for _ in range(50):
        g = Perm.identity(5)
        for k in rng.integers(0, len(gens), size=5):
            g = g * gens[k]
        assert g in A5
    assert Perm.from_cycles(5, (0, 1)) not in A5
    assert Perm.from_cycles(5, (0, 1)) in S5


def test_dense_matches_oracle_elements():
    for G in (symmetric(4), quaternion(), sl2(3)):
        D = G.dense()
        assert {D.perm(i).images for i in range(D.n)} == oracles.elements(G)
        assert D.perm(0).is_identity()
        i, j = 3, 5
        assert D.perm(int(D.table[i, j])) == D.perm(i) * D.perm(j)
        assert D.perm(int(D.inv[i])) == D.perm(i).inverse()


def test_random_element_uniform():
    assert all(PermGroup([], degree=3).random_element(np.random.default_rng(s)).is_identity() for s in range(5))
    rng = np.random.default_rng(7)
    C2 = cyclic(2)
    freq = sum(C2.random_element(rng).is_identity() for _ in range(10_000)) / 10_000
    assert 0.47 <= freq <= 0.53
    A5 = alternating(5)
    rng = np.random.default_rng(11)
    counts = Counter(A5.random_element(rng).images for _ in range(100_000))
    assert len(counts) == 60
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


def test_random_element_deterministic():
    G = psl2(11)
    a = [G.random_element(np.random.default_rng(3)) for _ in range(3)]
    assert len(set(a)) == 1


def test_products_and_wreath():
    G = direct_product(cyclic(2), cyclic(3))
    D = G.dense()
    assert G.order() == 6
    assert all(D.table[i, j] == D.table[j, i] for i in range(6) for j in range(6))
    W = wreath_with_top(alternating(5), symmetric(2))
    assert W.order() == 60**2 * 2
    assert wreath_with_top(cyclic(3), symmetric(3)).order() == 3**3 * 6


def test_quotient_by_center():
    G = sl2(5)
    D = G.dense()
    Z = D.centralizer(range(D.n))
    assert Z.sum() == 2
    Q = quotient_by_normal(G, Z).group
    assert Q.order() == 60
    hist = lambda H: Counter(H.dense().element_orders.tolist())  # noqa: E731
    assert hist(Q) == hist(psl2(5)) == hist(alternating(5))


def test_quotient_projection_is_homomorphism():
    G = symmetric(4)
    D = G.dense()
    V = D.closure([D.index(Perm.from_cycles(4, (0, 1), (2, 3))), D.index(Perm.from_cycles(4, (0, 2), (1, 3)))])
    q = quotient_by_normal(G, V)
    QD = q.group.dense()
    assert q.group.order() == 6
    for a in range(D.n):
        for b in range(0, D.n, 5):
            assert q.projection[D.table[a, b]] == QD.table[q.projection[a], q.projection[b]]
    with pytest.raises(ValueError):
        quotient_by_normal(G, D.closure([D.index(Perm.from_cycles(4, (0, 1)))]))


def test_closures_centralizer_core():
    S4 = symmetric(4)
    t = Perm.from_cycles(4, (0, 1))
    assert normal_closure(S4, [t]).order() == 24
    assert normal_closure(S4, [Perm.from_cycles(4, (0, 1), (2, 3))]).order() == 4
    assert centralizer(S4, PermGroup([t])).order() == 4
    H = PermGroup([t, Perm.from_cycles(4, (0, 1, 2))], degree=4)
    assert core(S4, H).order() == 1
    g = Perm.from_cycles(4, (2, 3))
    assert conjugate(H, g).order() == 6 and all(x in conjugate(H, g) for x in [Perm.from_cycles(4, (0, 1, 3))])


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_psl_is_simple_and_orders(p):
    G = psl2(p)
    D = G.dense()
    assert G.order() == p * (p * p - 1) // 2
    for x in D.class_representatives:
        if x:
            assert D.normal_closure([x]).sum() == D.n
    for o in set(D.element_orders.tolist()):
        assert p % o == 0 or ((p - 1) // 2) % o == 0 or ((p + 1) // 2) % o == 0


def test_json_round_trip(tmp_path):
    G = builtin("PSL(2,7)")
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_dict()))
    H = load_group(str(path))
    assert H.order() == 168 and H.fingerprint() == G.fingerprint()
    assert load_group("builtin:Dih(5)").order() == dihedral(5).order() == 10


def test_dense_size_refusal():
    with pytest.raises(SizeRefusal):
        symmetric(8).dense()
