"""Finite Dirichlet series with integer coefficients.

``DirichletPoly({1: 1, 2: -1})`` is 1 - 1/2^s.  Products are Dirichlet
convolutions.  ``phi`` sends n^-s to the monomial prod x_p^e (n = prod p^e), a
ring isomorphism onto the polynomial ring in prime-indexed variables, so
divisibility and irreducibility questions are settled on the polynomial side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .multipoly import (
    MultiPoly,
    binomial_form,
    gcd_poly,
    is_perfect_power,
)
from .numtheory import factorize, prime_divisors, v_part

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
INCONCLUSIVE = "inconclusive"
HYPOTHESES_NOT_MET = "hypotheses-not-met"


class DirichletPoly:
    """Immutable finite Dirichlet series sum a_n / n^s."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for n, a in items:
            n, a = int(n), int(a)
            if n < 1:
                raise ValueError(f"Dirichlet index must be positive, got {n}")
            acc[n] = acc.get(n, 0) + a
        self._c = {n: a for n, a in sorted(acc.items()) if a}
        self._hash = None

    @classmethod
    def one(cls) -> DirichletPoly:
        return cls({1: 1})

    @classmethod
    def term(cls, n: int, a: int) -> DirichletPoly:
        return cls({n: a})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def __getitem__(self, n: int) -> int:
        return self._c.get(n, 0)

    def support(self) -> list[int]:
        return list(self._c)

    def items(self):
        return self._c.items()

    def __len__(self):
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if isinstance(other, int):
            other = DirichletPoly({1: other})
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __neg__(self):
        return DirichletPoly({n: -a for n, a in self._c.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = DirichletPoly({1: other})
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return DirichletPoly(list(self._c.items()) + list(other._c.items()))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = DirichletPoly({1: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return DirichletPoly({n: a * other for n, a in self._c.items()})
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        acc: dict[int, int] = {}
        for d, a in self._c.items():
            for e, b in other._c.items():
                acc[d * e] = acc.get(d * e, 0) + a * b
        return DirichletPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = DirichletPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"DirichletPoly({self._c})"

    def __str__(self):
        return render(self)

    # serialization

    def to_records(self) -> list[dict[str, int]]:
        return [{"n": n, "a": a} for n, a in self._c.items()]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, int]]) -> DirichletPoly:
        return cls((r["n"], r["a"]) for r in records)

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_json(cls, text: str) -> DirichletPoly:
        return cls.from_records(json.loads(text))


def render(F: DirichletPoly) -> str:
    if F.is_zero():
        return "0"
    out = []
    for i, (n, a) in enumerate(F.items()):
        mag = abs(a)
        body = str(mag) if n == 1 else f"{mag}/{n}^s"
        if i == 0:
            out.append(body if a > 0 else f"-{body}")
        else:
            out.append(("+ " if a > 0 else "- ") + body)
    return " ".join(out)


def _coprime_to(n: int, primes: Iterable[int]) -> bool:
    return all(n % p for p in primes)


def project(F: DirichletPoly, primes: Iterable[int]) -> DirichletPoly:
    """Drop every term whose index is divisible by a prime in ``primes``."""
    primes = tuple(primes)
    return DirichletPoly({n: a for n, a in F.items() if _coprime_to(n, primes)})


def v_part_of(F: DirichletPoly, v: int) -> int:
    """Largest v-part of an index carrying a nonzero coefficient."""
    if F.is_zero():
        raise ValueError("v-part of the zero series is undefined")
    return max(v_part(n, v) for n in F.support())


def support_lcm(F: DirichletPoly) -> int:
    return lcm(*F.support()) if not F.is_zero() else 1


def shift(F: DirichletPoly, n: int) -> DirichletPoly:
    """F(n*s - n + 1): a_k/k^s becomes a_k*k^(n-1) / (k^n)^s."""
    if n < 1:
        raise ValueError("shift needs n >= 1")
    return DirichletPoly({k**n: a * k ** (n - 1) for k, a in F.items()})


def phi(F: DirichletPoly) -> MultiPoly:
    terms = []
    for n, a in F.items():
        terms.append((factorize(n).pairs, a))
    return MultiPoly(terms)


def phi_inverse(f: MultiPoly) -> DirichletPoly:
    acc = {}
    for mono, c in f.items():
        n = 1
        for p, e in mono:
            n *= p**e
        acc[n] = c
    return DirichletPoly(acc)


def in_R_prime(F: DirichletPoly) -> bool:
    """Whether n divides a_n for every index n."""
    return all(a % n == 0 for n, a in F.items())


def in_R_prime_pi(F: DirichletPoly, primes: Iterable[int]) -> bool:
    """Membership in R'_pi, read as: R' plus every index > 1 is a pi-number.

    The defining condition is taken as a support restriction (a_n = 0 unless n
    is composed of primes from ``primes``), matching the codomain Z[x_p : p in pi].
    """
    primes = set(primes)
    if not in_R_prime(F):
        return False
    return all(set(prime_divisors(n)) <= primes for n in F.support() if n > 1)


def evaluate(F: DirichletPoly, k: int) -> Fraction:
    if k < 0:
        raise ValueError("evaluation point must be >= 0")
    return sum((Fraction(a, n**k) for n, a in F.items()), Fraction(0))


# irreducibility lemmas


@dataclass
class Lemma10Result:
    verdict: str
    r: int
    a: MultiPoly | None = None
    m: int | None = None
    power_of: str | None = None
    reason: str = ""


def lemma10_test(F: DirichletPoly, r: int) -> Lemma10Result:
    """Binomial criterion: 1 - a*x^m is irreducible when neither a nor -a is a power.

    Never concludes reducibility.
    """
    if F[1] != 1:
        raise ValueError("lemma10_test needs constant term 1")
    form = binomial_form(phi(F), r)
    if form is None:
        return Lemma10Result(INCONCLUSIVE, r, reason=f"not of the form 1 - a*x{r}^m")
    a, m = form
    for sign, label in ((1, "a"), (-1, "-a")):
        if is_perfect_power(a * sign) is not None:
            return Lemma10Result(INCONCLUSIVE, r, a, m, power_of=label, reason=f"{label} is a perfect power")
    return Lemma10Result(IRREDUCIBLE, r, a, m)


@dataclass
class Lemma12Result:
    verdict: str
    m: int
    pi0: tuple[int, ...]
    pi: tuple[int, ...]
    v_parts: dict[int, tuple[int, int]] = field(default_factory=dict)
    h_pi: DirichletPoly | None = None
    gcd: MultiPoly | None = None
    failures: list[str] = field(default_factory=list)


def lemma12_test(h: DirichletPoly, pi0, pi, subproof: str) -> Lemma12Result:
    """Coprimality criterion for irreducibility of h.

    ``subproof`` is the verdict already obtained for h^(pi0).  When h^(pi0) is
    irreducible and its v-part equals that of m = lcm(support of h) for each v
    in pi, h is irreducible exactly when gcd(h, h^(pi)) = 1.
    """
    pi0, pi = tuple(sorted(pi0)), tuple(sorted(pi))
    m = support_lcm(h)
    res = Lemma12Result(HYPOTHESES_NOT_MET, m, pi0, pi)
    if subproof != IRREDUCIBLE:
        res.failures.append(f"h^(pi0) not attested irreducible (got {subproof})")
    if not pi:
        res.failures.append("pi is empty")
    missing = [v for v in pi if m % v]
    if missing:
        res.failures.append(f"pi not contained in pi(m): {missing}")
    h0 = project(h, pi0)
    for v in pi:
        if m % v:
            continue
        got, want = v_part_of(h0, v), v_part(m, v)
        res.v_parts[v] = (got, want)
        if got != want:
            res.failures.append(f"|h^(pi0)|_{v} = {got} != {want} = |m|_{v}")
    if res.failures:
        return res
    res.h_pi = project(h, pi)
    res.gcd = gcd_poly(phi(h), phi(res.h_pi))
    res.verdict = IRREDUCIBLE if res.gcd.is_unit() else REDUCIBLE
    return res
