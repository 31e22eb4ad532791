from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from probzeta.dirichlet import (
    HYPOTHESES_NOT_MET,
    INCONCLUSIVE,
    IRREDUCIBLE,
    DirichletPoly,
    evaluate,
    in_R_prime,
    in_R_prime_pi,
    lemma10_test,
    lemma12_test,
    phi,
    phi_inverse,
    project,
    render,
    shift,
    v_part_of,
)
from probzeta.multipoly import MultiPoly

# the PSL(2,11) polynomial as printed
PSL11 = DirichletPoly(
    {1: 1, 11: -22, 12: -12, 66: 66, 110: 220, 132: 132, 165: 165, 220: -220, 330: -990, 660: 660}
)


def D(**kw):
    return DirichletPoly({int(k[1:]): v for k, v in kw.items()})


def test_arithmetic_examples():
    F = DirichletPoly({1: 1, 2: -1})
    assert F * F == DirichletPoly({1: 1, 2: -2, 4: 1})
    assert F * DirichletPoly.one() == F
    S3 = F * DirichletPoly({1: 1, 3: -3})
    assert S3 == DirichletPoly({1: 1, 2: -1, 3: -3, 6: 3})
    assert (F - F).is_zero()
    assert F + 0 == F and 1 - F == DirichletPoly({2: 1})


def test_rejects_bad_index():
    with pytest.raises(ValueError):
        DirichletPoly({0: 1})


def test_render_and_records():
    assert render(PSL11).startswith("1 - 22/11^s - 12/12^s + 66/66^s")
    assert render(DirichletPoly()) == "0"
    assert DirichletPoly.from_json(PSL11.to_json()) == PSL11
    assert [r["n"] for r in PSL11.to_records()] == sorted(PSL11.support())


def test_project_examples():
    assert project(PSL11, {2}) == D(n1=1, n11=-22, n165=165)
    assert project(PSL11, ()) == PSL11
    assert project(DirichletPoly.one(), {2, 3, 5}) == DirichletPoly.one()
    assert project(PSL11, {5}) == D(n1=1, n11=-22, n12=-12, n66=66, n132=132)


def test_v_part_examples():
    assert v_part_of(PSL11, 2) == 4
    assert v_part_of(PSL11, 11) == 11
    assert v_part_of(DirichletPoly.one(), 3) == 1
    assert v_part_of(D(n1=1, n8=-3), 2) == 8
    with pytest.raises(ValueError):
        v_part_of(DirichletPoly(), 2)


def test_shift_examples():
    assert shift(PSL11, 1) == PSL11
    assert shift(D(n4=3), 2) == D(n16=12)
    assert shift(PSL11, 2).support() == sorted(k * k for k in PSL11.support())
    with pytest.raises(ValueError):
        shift(PSL11, 0)


def test_phi_examples():
    x2 = MultiPoly.var(2)
    assert phi(D(n1=1, n2=-1)) == 1 - x2
    assert phi(D(n12=-12)) == MultiPoly.var(2, 2, -12) * MultiPoly.var(3)
    assert phi_inverse(phi(PSL11)) == PSL11


def test_subring_membership():
    assert in_R_prime(D(n1=1, n11=-22))
    assert in_R_prime(PSL11)
    assert not in_R_prime(D(n1=1, n2=-1))
    assert in_R_prime_pi(D(n1=1, n2=-4), {2})
    assert not in_R_prime_pi(D(n1=1, n6=-6), {2})


def test_evaluate_examples():
    assert evaluate(D(n1=1, n2=-1), 1) == Fraction(1, 2)
    assert evaluate(D(n1=1, n2=-1, n3=-3, n6=3), 2) == Fraction(1, 2)
    assert evaluate(PSL11, 0) == 0
    with pytest.raises(ValueError):
        evaluate(PSL11, -1)


def test_lemma10_examples():
    assert lemma10_test(D(n1=1, n14=-6), 7).verdict == IRREDUCIBLE
    res = lemma10_test(D(n1=1, n4=-4), 2)
    assert res.verdict == INCONCLUSIVE and res.power_of == "a"
    assert lemma10_test(project(PSL11, {5}), 3).verdict == INCONCLUSIVE
    with pytest.raises(ValueError):
        lemma10_test(D(n1=2, n3=1), 3)


def test_lemma12_examples():
    res = lemma12_test(PSL11, {5}, {11, 3}, IRREDUCIBLE)
    assert res.verdict == IRREDUCIBLE
    assert res.m == 660
    assert res.v_parts == {3: (3, 3), 11: (11, 11)}
    assert res.h_pi == DirichletPoly.one()

    assert lemma12_test(PSL11, {5}, {7}, IRREDUCIBLE).verdict == HYPOTHESES_NOT_MET

    sq = D(n1=1, n2=-1) ** 2
    res = lemma12_test(sq, {3}, {2}, INCONCLUSIVE)
    assert res.verdict == HYPOTHESES_NOT_MET and res.failures


# random small Dirichlet polynomials over indices up to 36
small = st.dictionaries(st.integers(1, 36), st.integers(-5, 5), max_size=5).map(DirichletPoly)
prime_sets = st.sets(st.sampled_from((2, 3, 5, 7)), max_size=3)


@settings(max_examples=300, derandomize=True)
@given(small, small, prime_sets)
def test_project_is_multiplicative(F, G, pi):
    assert project(F * G, pi) == project(F, pi) * project(G, pi)
    assert project(F + G, pi) == project(F, pi) + project(G, pi)


@settings(max_examples=300, derandomize=True)
@given(small, small, st.integers(1, 3))
def test_shift_is_ring_endomorphism(F, G, n):
    assert shift(F * G, n) == shift(F, n) * shift(G, n)
    assert shift(F + G, n) == shift(F, n) + shift(G, n)
    assert shift(F, n).support() == sorted(k**n for k in F.support())


@settings(max_examples=300, derandomize=True)
@given(small, small)
def test_phi_is_multiplicative(F, G):
    assert phi(F * G) == phi(F) * phi(G)
    assert phi_inverse(phi(F)) == F


@settings(max_examples=300, derandomize=True)
@given(small, st.integers(0, 4))
def test_evaluate_is_multiplicative(F, k):
    G = D(n1=1, n2=-1, n3=-3, n6=3)
    assert evaluate(F * G, k) == evaluate(F, k) * evaluate(G, k)
