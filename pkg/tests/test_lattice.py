import numpy as np
import pytest

from probzeta.lattice import (
    SubgroupLattice,
    automorphism_group,
    chief_series,
    complements_count,
    enumerate_subgroups,
    frattini,
    full_lattice,
    hall_check,
    is_frattini_factor,
    maximal_subgroups,
    minimal_normal_subgroups,
    mobius_supplements,
    normal_subgroups,
)
from probzeta.permgroup import Perm, PermGroup, SizeRefusal, builtin, cyclic, direct_product

import oracles

SMALL = ["C(6)", "Sym(3)", "Dih(4)", "Q8", "Alt(4)", "SL(2,3)", "Sym(4)", "Dih(5)", "C(2) x C(2) x C(2)", "C(4) x C(2)"]


@pytest.fixture(scope="module", params=SMALL)
def small(request):
    G = builtin(request.param)
    subs = oracles.all_subgroups(G)
    return G, subs


def test_subgroups_match_oracle(small):
    G, subs = small
    L = full_lattice(G)
    assert set(L.all_subgroups()) == {oracles.to_bits(G, H) for H in subs}
    for c in L.classes:
        assert c.order * c.index == G.order()
        assert G.order() % c.size == 0
        assert len(c.members) == c.size


def test_mobius_matches_oracle(small):
    G, subs = small
    L = full_lattice(G)
    mu = oracles.mobius(subs, oracles.elements(G))
    for H, m in mu.items():
        assert L.classes[L.class_of(oracles.to_bits(G, H))].mu == m
    assert dict(L.polynomial().items()) == {1: 1, **oracles.zeta_coefficients(G, subs)}


def test_maximal_subgroups_match_oracle(small):
    G, subs = small
    assert set(maximal_subgroups(G)) == {oracles.to_bits(G, H) for H in oracles.maximal_subgroups(G, subs)}


def test_supplement_engine_with_whole_group(small):
    G, _ = small
    D = G.dense()
    assert mobius_supplements(G, D.full_bits).polynomial() == full_lattice(G).polynomial()
    assert mobius_supplements(G, 1).polynomial() == 1
    assert hall_check(full_lattice(G)) == []


def test_class_counts():
    assert len(enumerate_subgroups(builtin("Sym(3)")).classes) == 4
    L = full_lattice(builtin("Alt(4)"))
    assert sorted((c.order, c.size) for c in L.classes) == [(1, 1), (2, 3), (3, 4), (4, 1), (12, 1)]
    assert len(full_lattice(builtin("PSL(2,11)")).classes) == 16


def test_mobius_examples():
    L = full_lattice(cyclic(7))
    assert sorted(c.mu for c in L.classes) == [-1, 1]
    L = full_lattice(builtin("Sym(3)"))
    assert {(c.order, c.mu) for c in L.classes} == {(6, 1), (3, -1), (2, -1), (1, 3)}
    L = full_lattice(builtin("Alt(4)"))
    mu = {c.order: c.mu for c in L.classes}
    assert mu[2] == 0 and mu[1] == 4
    assert full_lattice(builtin("Alt(5)")).classes[0].mu == -60


def test_full_lattice_refuses_large_groups():
    with pytest.raises(SizeRefusal):
        enumerate_subgroups(builtin("Alt(5) x Alt(5)"))


def test_frattini_and_chief_series():
    G = builtin("SL(2,3)")
    assert frattini(G).bit_count() == 2
    assert frattini(builtin("Sym(3)")) == 1
    A4 = builtin("Alt(4)")
    series = chief_series(A4)
    assert [s.bit_count() for s in series] == [12, 4, 1]
    assert not is_frattini_factor(A4, series[1], series[2])
    assert not is_frattini_factor(A4, series[0], series[1])
    S = chief_series(G)
    assert [s.bit_count() for s in S] == [24, 8, 2, 1]
    assert is_frattini_factor(G, S[2], S[3])


@pytest.mark.parametrize("name", ["Sym(4)", "SL(2,3)", "Dih(4)", "Alt(5)", "C(2) x C(2) x C(2)"])
def test_normal_structure(name):
    G = builtin(name)
    D = G.dense()
    normals = normal_subgroups(G)
    for b in normals:
        assert D.is_normal(D.to_mask(b))
    minimal = minimal_normal_subgroups(G)
    assert all(b in normals and b != 1 for b in minimal)
    nontrivial = [b for b in normals if b != 1]
    assert all(not any(c != b and c & b == c and c != 1 for c in normals) for b in minimal)
    assert all(any(m & b == m for m in minimal) for b in nontrivial)
    series = chief_series(G)
    sizes = [s.bit_count() for s in series]
    assert sizes[0] == G.order() and sizes[-1] == 1
    assert all(sizes[i] % sizes[i + 1] == 0 for i in range(len(sizes) - 1))


def test_complements_count_examples():
    S3 = builtin("Sym(3)")
    A = PermGroup([Perm.from_cycles(3, (0, 1, 2))])
    assert complements_count(S3, A) == 3
    V = direct_product(cyclic(2), cyclic(2))
    assert complements_count(V, PermGroup([V.generators[0]])) == 2
    C4 = cyclic(4)
    assert complements_count(C4, PermGroup([C4.generators[0] ** 2])) == 0
    A5 = builtin("Alt(5)")
    with pytest.raises(ValueError):
        complements_count(A5, A5)


def test_complement_count_by_brute_force():
    G = builtin("Sym(4)")
    D = G.dense()
    V = D.closure([D.index(Perm.from_cycles(4, (0, 1), (2, 3))), D.index(Perm.from_cycles(4, (0, 2), (1, 3)))])
    vbits = D.to_bits(V)
    count = sum(1 for b in full_lattice(G).all_subgroups() if b.bit_count() == 6 and b & vbits == 1)
    assert complements_count(G, V) == count == 4


def test_automorphism_orders():
    assert automorphism_group(direct_product(cyclic(2), cyclic(2))).order() == 6
    assert automorphism_group(builtin("Alt(5)")).order() == 120
    assert automorphism_group(cyclic(3)).order() == 2
    assert automorphism_group(builtin("Q8")).order() == 24
    with pytest.raises(SizeRefusal):
        automorphism_group(builtin("PSL(2,11)"), bound=100)


def test_automorphisms_are_homomorphisms():
    A = builtin("Dih(4)")
    D = A.dense()
    aut = automorphism_group(A)
    T = D.table
    for phi in aut.maps:
        assert sorted(phi.tolist()) == list(range(D.n))
        assert np.array_equal(phi[T], np.array([[T[phi[a], phi[b]] for b in range(D.n)] for a in range(D.n)]))


def test_lattice_cache_round_trip(tmp_path):
    G = builtin("Sym(4)")
    L = full_lattice(G)
    path = tmp_path / "lat.json"
    L.save(str(path))
    M = SubgroupLattice.load(str(path), builtin("Sym(4)"))
    assert M.polynomial() == L.polynomial()
    assert [c.rep.bit_count() for c in M.classes] == [c.order for c in L.classes]
    with pytest.raises(ValueError):
        SubgroupLattice.load(str(path), builtin("SL(2,3)"))


def test_mobius_supplements_rejects_non_normal():
    G = builtin("Sym(3)")
    D = G.dense()
    with pytest.raises(ValueError):
        mobius_supplements(G, D.closure([D.index(Perm.from_cycles(3, (0, 1)))]))


def test_maximal_subgroups_of_products():
    assert len(maximal_subgroups(builtin("Alt(5) x Alt(5)"))) == 162
    # two classes of Alt(5), the Borel 11:5 and D12
    G = builtin("PSL(2,11)")
    assert len(maximal_subgroups(G)) == 11 + 11 + 12 + 55
    top = G.dense().full_bits
    proper = [b for b in full_lattice(G).all_subgroups() if b != top]
    by_lattice = {b for b in proper if not any(c != b and c & b == b for c in proper)}
    assert set(maximal_subgroups(G)) == by_lattice
