"""Sparse multivariate integer polynomials whose variables are indexed by primes.

A monomial is a sorted tuple of ``(prime, exponent)`` pairs, so ``x2**2 * x3``
is ``((2, 2), (3, 1))`` and the constant monomial is ``()``.  Polynomials built
from different groups therefore share variables by name, never by position.

Term order everywhere is lex with the smallest prime most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

from .numtheory import prime_divisors, primes_up_to

Monomial = tuple[tuple[int, int], ...]

ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for p, e in b:
        exps[p] = exps.get(p, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    exps = dict(a)
    for p, e in b:
        left = exps.get(p, 0) - e
        if left < 0:
            return None
        if left:
            exps[p] = left
        else:
            del exps[p]
    return tuple(sorted(exps.items()))


def _mono_pow(a: Monomial, k: int) -> Monomial:
    return tuple((p, e * k) for p, e in a)


def _exp(m: Monomial, var: int) -> int:
    for p, e in m:
        if p == var:
            return e
    return 0


def _without(m: Monomial, var: int) -> Monomial:
    return tuple((p, e) for p, e in m if p != var)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n (negative n allowed for odd k)."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = _iroot(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


class MultiPoly:
    """Immutable polynomial in Z[x_p : p prime]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            exps: dict[int, int] = {}
            for p, e in mono:
                exps[int(p)] = exps.get(int(p), 0) + int(e)
            mono = tuple(sorted((p, e) for p, e in exps.items() if e))
            acc[mono] = acc.get(mono, 0) + int(c)
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    # construction helpers

    @classmethod
    def const(cls, c: int) -> MultiPoly:
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, p: int, e: int = 1, coeff: int = 1) -> MultiPoly:
        return cls({((p, e),): coeff})

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # basic protocol

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == ONE_MONO for m in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(ONE_MONO, 0)

    def is_unit(self) -> bool:
        return self.is_constant() and abs(self.constant_term()) == 1

    def variables(self) -> list[int]:
        return sorted({p for m in self._terms for p, _ in m})

    def degree_in(self, var: int) -> int:
        return max((_exp(m, var) for m in self._terms), default=-1)

    def low_degree_in(self, var: int) -> int:
        return min((_exp(m, var) for m in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    # ring operations

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        acc = dict(self._terms)
        for m, c in other._terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return MultiPoly._raw(acc)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return MultiPoly()
            return MultiPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        acc: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ordering and normalization

    def leading_term(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        vs = self.variables()
        mono = max(self._terms, key=lambda m: tuple(_exp(m, v) for v in vs))
        return mono, self._terms[mono]

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in descending lex order."""
        vs = self.variables()
        return sorted(self._terms.items(), key=lambda t: tuple(_exp(t[0], v) for v in vs), reverse=True)

    def normalized(self) -> MultiPoly:
        """Associate with positive leading coefficient."""
        if self._terms and self.leading_term()[1] < 0:
            return -self
        return self

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def primitive_part(self) -> MultiPoly:
        c = self.content()
        if c in (0, 1):
            return self
        return MultiPoly._raw({m: v // c for m, v in self._terms.items()})

    # views in one variable

    def coefficients_in(self, var: int) -> dict[int, MultiPoly]:
        """Split as sum of ``coeff * x_var**e``; returns {e: coeff}."""
        out: dict[int, dict[Monomial, int]] = {}
        for m, c in self._terms.items():
            out.setdefault(_exp(m, var), {})[_without(m, var)] = c
        return {e: MultiPoly._raw(t) for e, t in out.items()}

    @classmethod
    def from_coefficients(cls, var: int, coeffs: Mapping[int, MultiPoly]) -> MultiPoly:
        acc: dict[Monomial, int] = {}
        for e, poly in coeffs.items():
            xm: Monomial = ((var, e),) if e else ONE_MONO
            for m, c in poly._terms.items():
                mm = _mono_mul(m, xm)
                acc[mm] = acc.get(mm, 0) + c
        return cls._raw({m: c for m, c in acc.items() if c})

    def substitute_power(self, n: int) -> MultiPoly:
        """Replace every x_p by x_p**n."""
        return MultiPoly._raw({_mono_pow(m, n): c for m, c in self._terms.items()})

    # rendering

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = "*".join(f"x{p}" if e == 1 else f"x{p}^{e}" for p, e in m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


def divide_exact(f: MultiPoly, g: MultiPoly) -> MultiPoly | None:
    """Return q with f == g*q, or None when g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return ZERO
    vs = sorted(set(f.variables()) | set(g.variables()))

    def key(m):
        return tuple(_exp(m, v) for v in vs)

    g_lead = max(g._terms, key=key)
    g_lc = g._terms[g_lead]
    rem = dict(f._terms)
    quot: dict[Monomial, int] = {}
    while rem:
        lead = max(rem, key=key)
        c = rem[lead]
        mono = _mono_div(lead, g_lead)
        if mono is None or c % g_lc:
            return None
        qc = c // g_lc
        quot[mono] = quot.get(mono, 0) + qc
        for m, gc in g._terms.items():
            mm = _mono_mul(m, mono)
            v = rem.get(mm, 0) - qc * gc
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return MultiPoly._raw({m: c for m, c in quot.items() if c})


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    return divide_exact(f, g) is not None


# gcd via primitive polynomial remainder sequences


def _prem(a: dict[int, MultiPoly], b: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
    """Pseudo-remainder of univariate polynomials with polynomial coefficients."""
    db = max(b)
    lb = b[db]
    r = {e: c for e, c in a.items() if not c.is_zero()}
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new: dict[int, MultiPoly] = {}
        for e, c in r.items():
            new[e] = c * lb
        for e, c in b.items():
            k = e + shift
            new[k] = new.get(k, ZERO) - c * lr
        r = {e: c for e, c in new.items() if not c.is_zero()}
    return r


def _content_in(coeffs: dict[int, MultiPoly]) -> MultiPoly:
    g = ZERO
    for c in coeffs.values():
        g = gcd_poly(g, c)
        if g.is_unit():
            return ONE
    return g


def _exact_coeffs(coeffs: dict[int, MultiPoly], d: MultiPoly) -> dict[int, MultiPoly]:
    out = {}
    for e, c in coeffs.items():
        q = divide_exact(c, d)
        if q is None:
            raise ArithmeticError("content does not divide coefficient")
        out[e] = q
    return out


def gcd_poly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalized to a positive leading coefficient."""
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.is_constant() or g.is_constant():
        c = gcd(f.content(), g.content())
        return MultiPoly.const(c)
    vs = sorted(set(f.variables()) | set(g.variables()))
    var = vs[0]
    if f.degree_in(var) == 0 or g.degree_in(var) == 0:
        # var occurs in only one argument: gcd lives in its content w.r.t. var
        if f.degree_in(var) == 0:
            f, g = g, f
        return gcd_poly(_content_in(f.coefficients_in(var)), g)
    a = f.coefficients_in(var)
    b = g.coefficients_in(var)
    ca, cb = _content_in(a), _content_in(b)
    cont = gcd_poly(ca, cb)
    a = _exact_coeffs(a, ca)
    b = _exact_coeffs(b, cb)
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            prim = b
            break
        if max(r) == 0:
            prim = {0: ONE}
            break
        a, b = b, _exact_coeffs(r, _content_in(r))
    result = MultiPoly.from_coefficients(var, prim) * cont
    return result.normalized()


# perfect powers


def kth_root(f: MultiPoly, k: int) -> MultiPoly | None:
    """Some g with g**k == f, or None."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return f
    if f.is_zero():
        return ZERO
    if f.is_constant():
        r = _iroot(f.constant_term(), k)
        return None if r is None else MultiPoly.const(r)
    var = f.variables()[0]
    coeffs = f.coefficients_in(var)
    hi, lo = max(coeffs), min(coeffs)
    if hi % k or lo % k:
        return None
    top = kth_root(coeffs[hi], k)
    if top is None:
        return None
    root = MultiPoly.from_coefficients(var, {hi // k: top})
    denom = top ** (k - 1) * k
    for j in range(hi // k - 1, lo // k - 1, -1):
        rest = f - root**k
        if rest.is_zero():
            break
        rc = rest.coefficients_in(var)
        target = (k - 1) * (hi // k) + j
        c = rc.get(target)
        if c is None:
            continue
        if max(rc) > target:
            return None
        gj = divide_exact(c, denom)
        if gj is None:
            return None
        root = root + MultiPoly.from_coefficients(var, {j: gj})
    return root if root**k == f else None


def _candidate_powers(f: MultiPoly) -> list[int]:
    if f.is_constant():
        return primes_up_to(abs(f.constant_term()).bit_length())
    g = 0
    for v in f.variables():
        g = gcd(g, f.degree_in(v))
        g = gcd(g, f.low_degree_in(v))
    g = gcd(g, f.total_degree())
    return list(prime_divisors(g)) if g > 1 else []


def is_perfect_power(f: MultiPoly) -> tuple[MultiPoly, int] | None:
    """(g, k) with k >= 2 and g**k == f, taking k as large as the search finds.

    Units count as powers (1 = 1**2, -1 = (-1)**3).
    """
    if f.is_zero():
        raise ValueError("zero is excluded")
    if f.is_unit():
        return (f, 2) if f.constant_term() == 1 else (f, 3)
    for k in _candidate_powers(f):
        g = kth_root(f, k)
        if g is not None:
            g = g.normalized() if k % 2 == 0 else g
            deeper = is_perfect_power(g) if not g.is_unit() else None
            if deeper is not None:
                return deeper[0], deeper[1] * k
            return g, k
    return None


# the three irreducibility strategies


def binomial_form(f: MultiPoly, r: int) -> tuple[MultiPoly, int] | None:
    """Write f = 1 - a * x_r**m with a free of x_r; returns (a, m)."""
    if f.constant_term() != 1:
        return None
    m = None
    a_terms: dict[Monomial, int] = {}
    for mono, c in f.items():
        if mono == ONE_MONO:
            continue
        e = _exp(mono, r)
        if e == 0 or (m is not None and e != m):
            return None
        m = e
        a_terms[_without(mono, r)] = -c
    if m is None:
        return None
    return MultiPoly(a_terms), m


@dataclass(frozen=True)
class VariableSplit:
    verdict: str  # "irreducible" | "reducible" | "inapplicable"
    var: int
    power: int
    A: MultiPoly | None = None
    B: MultiPoly | None = None
    gcd: MultiPoly | None = None
    witness: MultiPoly | None = None
    reason: str = ""


def split_in_variable(f: MultiPoly, r: int) -> tuple[MultiPoly, MultiPoly, int] | None:
    """Write f = A + B * x_r**m with A, B free of x_r, B != 0."""
    coeffs = f.coefficients_in(r)
    nonzero = [e for e in coeffs if e > 0]
    if len(nonzero) != 1:
        return None
    m = nonzero[0]
    return coeffs.get(0, ZERO), coeffs[m], m


def linear_variable_irreducible(f: MultiPoly, r: int) -> VariableSplit:
    split = split_in_variable(f, r)
    if split is None or split[2] != 1:
        return VariableSplit("inapplicable", r, 1, reason=f"x{r}-degree is not 1")
    return _decide_split(f, r, *split)


def power_variable_irreducible(f: MultiPoly, r: int) -> VariableSplit:
    """Decide f = A + B*x_r**m by Capelli's criterion on x**m + A/B.

    Over the fraction field, x**m - c is irreducible iff c is not a q-th power for
    any prime q | m (and not -4w**4 when 4 | m).  With gcd(A, B) = 1 a q-th power
    c = -A/B forces -A = e*u**q, B = e*v**q for a unit e.  Gauss's lemma lifts
    irreducibility back to Z[x].  The 4 | m case is left inapplicable.
    """
    split = split_in_variable(f, r)
    if split is None:
        return VariableSplit("inapplicable", r, 0, reason=f"x{r} occurs with several positive exponents")
    return _decide_split(f, r, *split)


def _decide_split(f, r, A, B, m) -> VariableSplit:
    c = f.content()
    if c > 1:
        return VariableSplit("reducible", r, m, A, B, witness=MultiPoly.const(c), reason="content")
    if A.is_zero():
        # f = B * x_r**m
        if m == 1 and B.is_unit():
            return VariableSplit("irreducible", r, m, A, B, gcd=B.normalized())
        return VariableSplit("reducible", r, m, A, B, witness=MultiPoly.var(r), reason="monomial factor")
    g = gcd_poly(A, B)
    if not g.is_unit():
        return VariableSplit("reducible", r, m, A, B, gcd=g, witness=g, reason="common factor of A and B")
    if m == 1:
        return VariableSplit("irreducible", r, m, A, B, gcd=g)
    if m % 4 == 0:
        return VariableSplit("inapplicable", r, m, A, B, gcd=g, reason="4 divides the exponent")
    for q in prime_divisors(m):
        for sign in (1, -1):
            u = kth_root(-A * sign, q)
            v = kth_root(B * sign, q)
            if u is not None and v is not None:
                witness = MultiPoly.var(r, m // q) * v - u
                return VariableSplit("reducible", r, m, A, B, gcd=g, witness=witness, reason=f"-A/B is a perfect power of degree {q}")
    return VariableSplit("irreducible", r, m, A, B, gcd=g)


def brute_force_factor(
    f: MultiPoly, max_terms: int = 3, coeff_bound: int | None = None, limit: int = 200_000
) -> MultiPoly | None:
    """Search for a proper divisor of f with few terms inside f's degree box.

    Only ever proves reducibility: a None result means nothing was found within
    the bounds.  Used as a last-resort strategy and as a test oracle.
    """
    if f.is_zero() or f.is_unit():
        return None
    c = f.content()
    if c > 1 and not f.is_constant():
        return MultiPoly.const(c)
    vs = f.variables()
    box = [range(f.degree_in(v) + 1) for v in vs]
    monos = [tuple((v, e) for v, e in zip(vs, exps) if e) for exps in itertools.product(*box)]
    if coeff_bound is None:
        coeff_bound = max(abs(x) for _, x in f.items())
    coeff_choices = [x for x in range(-coeff_bound, coeff_bound + 1) if x]
    tried = 0
    for size in range(1, max_terms + 1):
        for support in itertools.combinations(monos, size):
            for coeffs in itertools.product(coeff_choices, repeat=size):
                if coeffs[0] < 0:
                    continue
                tried += 1
                if tried > limit:
                    return None
                g = MultiPoly(zip(support, coeffs))
                if g.is_unit() or g.is_zero():
                    continue
                q = divide_exact(f, g)
                if q is not None and not q.is_unit():
                    return g
    return None
