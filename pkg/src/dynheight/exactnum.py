"""Places of Q and normalized logarithmic absolute values.

A place of Q is either the archimedean absolute value or the p-adic one
attached to a prime p.  With the normalizations used here,

    log|q|_inf = ln|q|,        log|q|_p = -ord_p(q) * ln(p),

the product formula holds: for any nonzero rational q the sum of
log_abs(q, v) over all places is zero.  Only finitely many places
contribute (the archimedean one plus the primes dividing numerator or
denominator), so the identity is checkable on a finite support set.

Everything exact is kept in arbitrary-precision integers or Fractions;
reals appear only as final logarithmic values in double precision, and all
logs are natural logs, so heights built on top of this module are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Place",
    "ord_p",
    "ord_p_rational",
    "log_abs",
    "support",
    "is_prime",
    "prime_factors",
]


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check (desk-scale inputs)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; n odd composite, not a prime power of interest.
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to factor {n}")


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorization of |n| as a dict prime -> exponent, n != 0."""
    if n == 0:
        raise ValueError("cannot factor zero")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    while d * d <= n and d < 10**6:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    # Anything left is either prime or a product of two large primes.
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack.extend((d, m // d))
    return out


@dataclass(frozen=True)
class Place:
    """The archimedean place (p is None) or the finite place at a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def sort_key(self) -> tuple[int, int]:
        # archimedean place first, then finite places by p
        return (0, 0) if self.p is None else (1, self.p)

    def __str__(self) -> str:
        return "inf" if self.p is None else f"p{self.p}"

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = text.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return cls.infinity()
        if text.startswith("p") and text[1:].isdigit():
            return cls.prime(int(text[1:]))
        raise ValueError(f"cannot parse place {text!r} (use 'inf' or 'pN')")


INFINITY = Place.infinity()


def ord_p(n: int, p: int) -> int:
    """Largest e with p^e dividing n; n must be nonzero and p prime."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    e = 0
    while n % p == 0:
        e += 1
        n //= p
    return e


def ord_p_rational(q: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational, ord_p(a/b) = ord_p(a) - ord_p(b)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of zero")
    return ord_p(q.numerator, p) - ord_p(q.denominator, p)


def log_abs(q: Fraction | int, v: Place) -> float:
    """Normalized logarithmic absolute value log|q|_v of a nonzero rational.

    math.log handles arbitrary-precision integers, so numerator and
    denominator are logged separately to avoid float overflow.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("log of zero")
    if v.is_infinite:
        return math.log(abs(q.numerator)) - math.log(q.denominator)
    return -ord_p_rational(q, v.p) * math.log(v.p)


def support(q: Fraction | int) -> list[Place]:
    """All places where a nonzero rational can have log_abs != 0."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("support of zero")
    primes = set(prime_factors(q.numerator)) | set(prime_factors(q.denominator))
    return [INFINITY] + [Place.prime(p) for p in sorted(primes)]
