import dataclasses

import pytest
import sympy

from probzeta.dirichlet import HYPOTHESES_NOT_MET, IRREDUCIBLE, DirichletPoly, phi, project
from probzeta.multipoly import brute_force_factor
from probzeta.verifier import (
    STRATEGIES,
    IrredCertificate,
    recheck,
    verify_irreducible,
    verify_pgl_identity,
)

from test_multipoly import sympy_irreducible

CASES = [(11, 1, "PSL"), (13, 1, "PSL"), (11, 2, "PSL"), (13, 2, "PSL"), (19, 1, "PSL"), (11, 1, "PGL"), (13, 1, "PGL")]


@pytest.fixture(scope="module")
def certs():
    return {case: verify_irreducible(*case) for case in CASES}


@pytest.mark.parametrize("case", CASES)
def test_irreducible_certificates(certs, case):
    cert = certs[case]
    assert cert.verdict == IRREDUCIBLE, cert.summary()
    assert cert.step_verdict == IRREDUCIBLE and cert.strategy in STRATEGIES
    assert recheck(cert) == []
    assert cert.seral_dependent == (case[1] > 1)
    assert IrredCertificate.from_json(cert.to_json()) == cert


@pytest.mark.parametrize("case", CASES)
def test_irreducible_verdicts_agree_with_sympy(certs, case):
    cert = certs[case]
    assert sympy_irreducible(phi(cert.h_t))
    assert sympy_irreducible(phi(cert.h))


@pytest.mark.parametrize("case", CASES)
def test_brute_force_finds_nothing(certs, case):
    f = phi(certs[case].h_t)
    if len(f.items()) <= 8:
        assert brute_force_factor(f, limit=20_000) is None


def test_psl11_details(certs):
    cert = certs[(11, 1, "PSL")]
    assert (cert.t, cert.r) == (5, 3)
    assert cert.h_t == DirichletPoly({1: 1, 11: -22, 12: -12, 66: 66, 132: 132})
    assert cert.strategy == "linear-variable"
    assert cert.lemma12["m"] == 660
    assert cert.lemma12["v_parts"] == {"3": [3, 3], "11": [11, 11]}
    assert cert.lemma12["h_pi"] == [{"n": 1, "a": 1}]
    assert cert.summary() == "p=11 n=1 PSL: irreducible [t=5, r=3, pi0-step: linear-variable]"


def test_psl13_uses_binomial(certs):
    cert = certs[(13, 1, "PSL")]
    assert (cert.t, cert.r) == (3, 7)
    assert cert.strategy == "binomial+lemma10"


def test_shifted_certificate_records_its_source(certs):
    cert = certs[(11, 2, "PSL")]
    assert cert.h_source == "seral-shift" and cert.notes
    assert cert.h.support() == sorted(k * k for k in certs[(11, 1, "PSL")].h.support())


def test_mersenne_rejected():
    cert = verify_irreducible(7, 1, "PSL")
    assert cert.verdict == HYPOTHESES_NOT_MET
    assert "Mersenne" in cert.r_reason and "Mersenne" in cert.summary()
    assert recheck(cert) == []
    assert verify_irreducible(31, 1).verdict == HYPOTHESES_NOT_MET


@pytest.mark.parametrize("p", [5, 17])
def test_fermat_primes_have_no_t(p):
    cert = verify_irreducible(p, 1, "PSL")
    assert cert.t is None and cert.verdict == HYPOTHESES_NOT_MET
    assert "t is absent" in cert.t_reason


def test_bad_arguments():
    with pytest.raises(ValueError):
        verify_irreducible(9)
    with pytest.raises(ValueError):
        verify_irreducible(11, 0)
    with pytest.raises(ValueError):
        verify_irreducible(11, 1, "PSU")


def test_determinism():
    a = verify_irreducible(11, 1, "PSL").to_json()
    b = verify_irreducible(11, 1, "PSL").to_json()
    assert a == b


def tampered(cert, **changes):
    return dataclasses.replace(cert, **changes)


def test_recheck_detects_tampering(certs):
    cert = certs[(11, 1, "PSL")]
    h = cert.h + DirichletPoly({660: 1})
    assert recheck(tampered(cert, h=h))
    assert recheck(tampered(cert, h_t=project(cert.h, [3])))
    assert recheck(tampered(cert, phi_h_t="1"))
    assert recheck(tampered(cert, r=7))
    assert recheck(tampered(cert, verdict=HYPOTHESES_NOT_MET))
    assert recheck(tampered(cert, strategy="binomial+lemma10"))
    assert recheck(tampered(cert, strategy="made-up"))
    wit = dict(cert.witnesses, A=[[[], 2]])
    assert recheck(tampered(cert, witnesses=wit))
    lem = dict(cert.lemma12, m=330)
    assert recheck(tampered(cert, lemma12=lem))
    assert recheck(tampered(cert, step_verdict="inconclusive"))


def test_recheck_detects_tampered_binomial(certs):
    cert = certs[(13, 1, "PSL")]
    assert recheck(tampered(cert, witnesses=dict(cert.witnesses, m=cert.witnesses["m"] + 1)))


def test_fake_hypotheses_failure_detected(certs):
    cert = certs[(11, 1, "PSL")]
    assert recheck(tampered(cert, verdict=HYPOTHESES_NOT_MET)) != []


@pytest.mark.parametrize("p", [5, 7])
def test_pgl_identity(p):
    report = verify_pgl_identity(p)
    assert report.equal and report.mu_of_S == -1
    assert report.to_dict()["equal"] is True


def test_sympy_oracle_sanity():
    # the oracle itself must flag a genuine square
    x = sympy.Symbol("x2")
    assert sympy.factor_list(1 - 4 * x**2)[1] != [(1 - 4 * x**2, 1)]
