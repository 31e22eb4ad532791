"""Irreducibility certificates for P_{L,soc(L)} with socle PSL(2,p)^n.

The pipeline: t is the largest prime dividing p-1 but not p+1, r a Zsigmondy
prime for (p, 2).  First the projection h^(t) is shown irreducible, then the
coprimality criterion with pi = {p, r} lifts irreducibility to h itself.
Every step stores enough data for ``recheck`` to redo it from the polynomials
alone, without touching any group.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .dirichlet import (
    HYPOTHESES_NOT_MET,
    INCONCLUSIVE,
    IRREDUCIBLE,
    REDUCIBLE,
    DirichletPoly,
    evaluate,
    lemma10_test,
    lemma12_test,
    phi,
    project,
    shift,
    v_part_of,
)
from .lattice import full_lattice, minimal_normal_subgroups
from .multipoly import (
    MultiPoly,
    binomial_form,
    brute_force_factor,
    gcd_poly,
    is_perfect_power,
    kth_root,
    linear_variable_irreducible,
    power_variable_irreducible,
    split_in_variable,
)
from .numtheory import is_mersenne_prime, is_prime, largest_t, prime_divisors, v_part, zsigmondy
from .permgroup import pgl2, psl2
from .zeta import p_g, p_gn

STRATEGIES = ("binomial+lemma10", "linear-variable", "power-variable", "oracle-brute-force")


def poly_to_json(f: MultiPoly | None):
    if f is None:
        return None
    return [[[list(pe) for pe in mono], c] for mono, c in f.sorted_terms()]


def poly_from_json(data) -> MultiPoly | None:
    if data is None:
        return None
    return MultiPoly((tuple(tuple(pe) for pe in mono), c) for mono, c in data)


@dataclass
class IrredCertificate:
    p: int
    n: int
    variant: str  # "PSL" or "PGL"
    t: int | None
    t_reason: str
    r: int | None
    r_reason: str
    h: DirichletPoly | None = None
    h_source: str = ""  # "lattice" or "seral-shift"
    h_t: DirichletPoly | None = None
    phi_h_t: str = ""
    strategy: str | None = None
    witnesses: dict = field(default_factory=dict)
    lemma12: dict = field(default_factory=dict)
    step_verdict: str | None = None
    verdict: str = INCONCLUSIVE
    notes: list[str] = field(default_factory=list)

    @property
    def seral_dependent(self) -> bool:
        return self.h_source == "seral-shift"

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("h", "h_t"):
            val = getattr(self, key)
            out[key] = val.to_records() if val is not None else None
        out["seral_dependent"] = self.seral_dependent
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> IrredCertificate:
        data = dict(data)
        data.pop("seral_dependent", None)
        for key in ("h", "h_t"):
            if data.get(key) is not None:
                data[key] = DirichletPoly.from_records(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> IrredCertificate:
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        head = f"p={self.p} n={self.n} {self.variant}: {self.verdict}"
        if self.verdict == HYPOTHESES_NOT_MET:
            missing = [x for x in (self.t_reason, self.r_reason) if x]
            return head + " (" + "; ".join(missing) + ")"
        return head + f" [t={self.t}, r={self.r}, pi0-step: {self.strategy}]"


def _hypotheses(p: int) -> tuple[int | None, str, int | None, str]:
    t = largest_t(p)
    t_reason = "" if t is not None else f"no prime divides {p}-1 without dividing {p}+1, so t is absent"
    r = zsigmondy(p, 2)
    r_reason = ""
    if r is None:
        r_reason = f"{p} is a Mersenne prime, so {p}^2-1 has no Zsigmondy prime (exception n=2, a=2^s-1)"
    return t, t_reason, r, r_reason


def base_polynomial(p: int, variant: str) -> DirichletPoly:
    """P_{X,S} for X = PSL(2,p) or PGL(2,p) and S = PSL(2,p)."""
    if variant == "PSL":
        return p_g(psl2(p))
    X = pgl2(p)
    (S,) = minimal_normal_subgroups(X)
    return p_gn(X, S)


def _pi0_step(h_t: DirichletPoly, r: int, bf_limit: int) -> tuple[str, str | None, dict]:
    """Irreducibility of h^(t): (verdict, strategy, witnesses)."""
    f = phi(h_t)
    res = lemma10_test(h_t, r)
    if res.verdict == IRREDUCIBLE:
        return IRREDUCIBLE, "binomial+lemma10", {"var": r, "a": poly_to_json(res.a), "m": res.m}
    tried = {"binomial+lemma10": res.reason}
    # variables of largest prime index first
    for strategy, test in (("linear-variable", linear_variable_irreducible), ("power-variable", power_variable_irreducible)):
        for var in sorted(f.variables(), reverse=True):
            split = test(f, var)
            if split.verdict in (IRREDUCIBLE, REDUCIBLE):
                wit = {
                    "var": var,
                    "power": split.power,
                    "A": poly_to_json(split.A),
                    "B": poly_to_json(split.B),
                    "gcd": poly_to_json(split.gcd),
                }
                if split.witness is not None:
                    wit["factor"] = poly_to_json(split.witness)
                return split.verdict, strategy, wit
        tried[strategy] = "no variable gave a decisive split"
    factor = brute_force_factor(f, limit=bf_limit)
    if factor is not None:
        return REDUCIBLE, "oracle-brute-force", {"factor": poly_to_json(factor)}
    return INCONCLUSIVE, None, {"tried": tried}


def verify_irreducible(p: int, n: int = 1, variant: str = "PSL", base: DirichletPoly | None = None, bf_limit: int = 50_000) -> IrredCertificate:
    variant = variant.upper()
    if variant not in ("PSL", "PGL"):
        raise ValueError("variant must be PSL or PGL")
    if not is_prime(p) or p < 5:
        raise ValueError("p must be a prime >= 5")
    if n < 1:
        raise ValueError("n must be >= 1")
    t, t_reason, r, r_reason = _hypotheses(p)
    cert = IrredCertificate(p, n, variant, t, t_reason, r, r_reason)
    if t is None or r is None:
        cert.verdict = HYPOTHESES_NOT_MET
        return cert
    h0 = base if base is not None else base_polynomial(p, variant)
    if n == 1:
        cert.h, cert.h_source = h0, "lattice"
    else:
        cert.h, cert.h_source = shift(h0, n), "seral-shift"
        cert.notes.append(
            f"h is P_{{X,S}}(ns-n+1) with n={n}; it agrees with P_{{L,soc(L)}} on every single-prime projection"
        )
    cert.h_t = project(cert.h, [t])
    cert.phi_h_t = str(phi(cert.h_t))
    cert.step_verdict, cert.strategy, cert.witnesses = _pi0_step(cert.h_t, r, bf_limit)
    cert.lemma12 = _lemma12_data(cert.h, p, r, t, n, cert.step_verdict)
    cert.verdict = cert.lemma12["verdict"]
    return cert


def _lemma12_data(h: DirichletPoly, p: int, r: int, t: int, n: int, step: str) -> dict:
    res = lemma12_test(h, [t], [p, r], step)
    s_order = p * (p * p - 1) // 2
    h_t = project(h, [t])
    return {
        "verdict": res.verdict,
        "m": res.m,
        "pi0": list(res.pi0),
        "pi": list(res.pi),
        "v_parts": {str(v): list(pair) for v, pair in sorted(res.v_parts.items())},
        "socle_v_parts": {str(v): [v_part_of(h_t, v), v_part(s_order, v) ** n] for v in (p, r)},
        "h_pi_t": project(h, [p, r, t]).to_records(),
        "h_pi": res.h_pi.to_records() if res.h_pi is not None else None,
        "gcd": poly_to_json(res.gcd),
        "failures": list(res.failures),
    }


# ---------------------------------------------------------------- recheck


def recheck(cert: IrredCertificate) -> list[str]:
    """Re-validate a certificate from its stored polynomials; returns the problems found."""
    problems = []
    t, _, r, _ = _hypotheses(cert.p)
    if (t, r) != (cert.t, cert.r):
        problems.append(f"t, r should be {t}, {r}")
    if cert.verdict == HYPOTHESES_NOT_MET:
        if t is not None and r is not None:
            problems.append("hypotheses are in fact met")
        return problems
    h = cert.h
    if h is None or h[1] != 1:
        return problems + ["missing or malformed h"]
    # h(1) is the chance that one element generates; shifting keeps the value at 1
    if evaluate(h, 1) != 0:
        problems.append("h(1) != 0, so h is not a generation polynomial of a noncyclic group")
    if cert.h_t != project(h, [t]):
        problems.append("h_t is not the t-projection of h")
    if cert.phi_h_t != str(phi(cert.h_t)):
        problems.append("stored image of h_t does not match")
    try:
        problems += _recheck_step(cert)
    except (KeyError, TypeError, ValueError) as exc:
        problems.append(f"malformed witnesses for {cert.strategy}: {exc!r}")
    data = _lemma12_data(h, cert.p, r, t, cert.n, cert.step_verdict)
    for key, val in data.items():
        if cert.lemma12.get(key) != val:
            problems.append(f"coprimality-step field {key} differs on recomputation")
    if cert.verdict != data["verdict"]:
        problems.append("verdict does not follow from the recorded steps")
    if cert.verdict == IRREDUCIBLE and cert.step_verdict != IRREDUCIBLE:
        problems.append("irreducible verdict without an irreducible pi0-step")
    return problems


def _recheck_step(cert: IrredCertificate) -> list[str]:
    f = phi(cert.h_t)
    w = cert.witnesses
    s = cert.strategy
    if s == "binomial+lemma10":
        a, m = poly_from_json(w["a"]), w["m"]
        if binomial_form(f, w["var"]) != (a, m):
            return ["binomial form does not match"]
        if any(is_perfect_power(a * e) is not None for e in (1, -1)):
            return ["a or -a is a perfect power"]
        return [] if cert.step_verdict == IRREDUCIBLE else ["step verdict inconsistent"]
    if s in ("linear-variable", "power-variable"):
        A, B = poly_from_json(w["A"]), poly_from_json(w["B"])
        split = split_in_variable(f, w["var"])
        if split is None or (split[0], split[1], split[2]) != (A, B, w["power"]):
            return ["split A + B*x^m does not match"]
        if s == "linear-variable" and w["power"] != 1:
            return ["linear strategy with exponent != 1"]
        g = gcd_poly(A, B)
        if cert.step_verdict == IRREDUCIBLE:
            if not g.is_unit() or f.content() != 1:
                return ["gcd(A, B) or content is not a unit"]
            m = w["power"]
            if m % 4 == 0:
                return ["exponent divisible by 4 is outside the criterion"]
            for q in prime_divisors(m) if m > 1 else ():
                for e in (1, -1):
                    if kth_root(-A * e, q) is not None and kth_root(B * e, q) is not None:
                        return [f"-A/B is a {q}-th power"]
            return []
        factor = poly_from_json(w.get("factor"))
        if factor is None or (f.is_zero() or not _divides(factor, f)):
            return ["claimed factor does not divide"]
        return []
    if s == "oracle-brute-force":
        factor = poly_from_json(w["factor"])
        return [] if _divides(factor, f) else ["claimed factor does not divide"]
    if cert.step_verdict == INCONCLUSIVE:
        return []
    return [f"unknown strategy {s!r}"]


def _divides(g: MultiPoly, f: MultiPoly) -> bool:
    from .multipoly import divides

    return divides(g, f)


# ---------------------------------------------------------------- PGL identity


@dataclass
class PGLIdentityReport:
    p: int
    left: DirichletPoly  # P_{X,S}
    right: DirichletPoly  # -sum_{H <= S} mu_X(H) / |S:H|^s
    mu_of_S: int

    @property
    def equal(self) -> bool:
        return self.left == self.right

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "left": self.left.to_records(),
            "right": self.right.to_records(),
            "mu_of_S": self.mu_of_S,
            "equal": self.equal,
        }


def verify_pgl_identity(p: int) -> PGLIdentityReport:
    X = pgl2(p)
    (S,) = minimal_normal_subgroups(X)
    left = p_gn(X, S)
    L = full_lattice(X)
    s_order = S.bit_count()
    acc: dict[int, int] = {}
    mu_s = 0
    for c in L.classes:
        inside = sum(1 for b in c.members if b & S == b)
        if not inside or not c.mu:
            continue
        if c.order == s_order:
            mu_s = c.mu
        idx = s_order // c.order
        acc[idx] = acc.get(idx, 0) - inside * c.mu
    return PGLIdentityReport(p, left, DirichletPoly(acc), mu_s)


def mersenne_note(p: int) -> str | None:
    return f"{p} is a Mersenne prime" if is_prime(p) and is_mersenne_prime(p) else None
