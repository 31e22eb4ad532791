"""Elementary prime arithmetic.

Everything here works on ordinary Python integers with trial division; the
group orders handled by this package stay well below 10**12.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, prod


@dataclass(frozen=True)
class PrimeFactorization:
    """Canonical factorization as ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ..."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return prod(p**e for p, e in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def _require_prime(p: int, what: str = "p") -> None:
    if not is_prime(p):
        raise ValueError(f"{what}={p} is not prime")


def factorize(n: int) -> PrimeFactorization:
    if n <= 0:
        raise ValueError(f"cannot factorize {n}")
    pairs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            pairs.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        pairs.append((n, 1))
    return PrimeFactorization(tuple(pairs))


def prime_divisors(n: int) -> tuple[int, ...]:
    """The set pi(n) of primes dividing n, sorted."""
    return factorize(n).primes


def v_part(n: int, v: int) -> int:
    """Largest power of the prime ``v`` dividing ``n``."""
    _require_prime(v, "v")
    if n <= 0:
        raise ValueError(f"v_part needs a positive integer, got {n}")
    part = 1
    while n % v == 0:
        n //= v
        part *= v
    return part


def zsigmondy(a: int, n: int) -> int | None:
    """Smallest primitive prime divisor of ``a**n - 1``, or None if there is none.

    A primitive prime divides ``a**n - 1`` but no ``a**e - 1`` with ``1 <= e < n``.
    """
    if a < 2 or n < 2:
        raise ValueError("zsigmondy needs a >= 2 and n >= 2")
    for q in prime_divisors(a**n - 1):
        # order of a mod q equals n exactly when q is primitive
        if all(pow(a, e, q) != 1 for e in range(1, n)):
            return q
    return None


def is_mersenne_prime(p: int) -> bool:
    _require_prime(p)
    m = p + 1
    return m & (m - 1) == 0


def largest_t(p: int) -> int | None:
    """Largest prime divisor of p-1 that does not divide p+1."""
    _require_prime(p)
    if p < 5:
        raise ValueError("largest_t needs p >= 5")
    candidates = [q for q in prime_divisors(p - 1) if (p + 1) % q != 0]
    return max(candidates) if candidates else None


def bertrand_prime(p: int) -> int:
    """Smallest prime strictly between (p+1)/2 and p-1."""
    if p <= 11:
        raise ValueError("bertrand_prime needs p > 11")
    lo = (p + 1) // 2 + 1  # strict lower bound; (p+1)/2 is an integer for odd p
    for l in range(lo, p - 1):
        if is_prime(l):
            return l
    raise RuntimeError(f"no prime in ((p+1)/2, p-1) for p={p}")


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]
