"""Primitive projective points over Q and Q(t), and their naive heights.

A point of P^N(Q) is stored by its unique primitive integer representative:
coprime coordinates with the first nonzero one positive.  The naive Weil
height is ln of the sup norm of that representative; the standard local
height against the coordinate hyperplane {x_j = 0} is

    lambda_v(P, j) = ln( max_i |x_i|_v / |x_j|_v ),

which is nonnegative at every place and sums to the Weil height over the
archimedean place plus the primes dividing the coordinates.

Points over Q(t) are tuples of integer polynomials in t with no common
nonconstant factor; constants are units of Q(t), so integer content is
only removed for a deterministic representative.  Their height is the
maximum coordinate degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import PointOnDivisorError, ValidationError
from .exactnum import Place, ord_p
from .polynomial import TPoly

__all__ = [
    "ProjPointQ",
    "ProjPointFF",
    "normalize",
    "normalize_ff",
    "parse_point",
    "weil_height",
    "local_height_hyperplane",
    "ff_height",
]


@dataclass(frozen=True)
class ProjPointQ:
    """Primitive integer representative of a point of P^N(Q)."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not self.coords or all(c == 0 for c in self.coords):
            raise ValidationError("not a projective point")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return ":".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class ProjPointFF:
    """Point of P^N over Q(t): coprime integer polynomial coordinates."""

    coords: tuple[TPoly, ...]

    def __post_init__(self):
        if not self.coords or all(c.is_zero for c in self.coords):
            raise ValidationError("not a projective point")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return ":".join(str(c) for c in self.coords)


def normalize(raw) -> ProjPointQ:
    """Canonical primitive representative of a tuple of rationals.

    Clears denominators, divides by the coordinate gcd and fixes the sign of
    the first nonzero coordinate to be positive.
    """
    vals = [Fraction(v) for v in raw]
    if not vals or all(v == 0 for v in vals):
        raise ValidationError("not a projective point")
    scale = lcm(*(v.denominator for v in vals))
    ints = [int(v * scale) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return ProjPointQ(tuple(ints))


def parse_point(text: str) -> ProjPointQ:
    """Parse "a0 : a1 : ... : aN" with rational entries."""
    parts = [p.strip() for p in text.split(":")]
    if len(parts) < 2:
        raise ValidationError(f"cannot parse point {text!r}")
    try:
        vals = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse point {text!r}: {exc}") from exc
    return normalize(vals)


def weil_height(point: ProjPointQ) -> float:
    """Naive logarithmic height: ln max_i |x_i| on primitive coordinates."""
    return math.log(max(abs(c) for c in point.coords))


def local_height_hyperplane(point: ProjPointQ, j: int, v: Place) -> float:
    """Standard local height of P against the hyperplane {x_j = 0} at v."""
    coords = point.coords
    if not 0 <= j < len(coords):
        raise ValidationError(f"coordinate index {j} out of range")
    if coords[j] == 0:
        raise PointOnDivisorError("point on divisor")
    if v.is_infinite:
        return math.log(max(abs(c) for c in coords)) - math.log(abs(coords[j]))
    p = v.p
    min_ord = min(ord_p(c, p) for c in coords if c != 0)
    return (ord_p(coords[j], p) - min_ord) * math.log(p)


def normalize_ff(raw) -> ProjPointFF:
    """Canonical representative over Q(t).

    Removes the common polynomial factor of the coordinates (coprimality in
    Q(t)), then integer content and the sign of the first nonzero leading
    coefficient for determinism.
    """
    polys = [p if isinstance(p, TPoly) else TPoly.const(p) for p in raw]
    if not polys or all(p.is_zero for p in polys):
        raise ValidationError("not a projective point")
    g = TPoly()
    for p in polys:
        g = g.gcd(p) if not g.is_zero else p.primitive()
        if g.degree == 0:
            break
    if g.degree > 0:
        polys = [p.divexact(g) for p in polys]
    content = 0
    for p in polys:
        content = gcd(content, p.content())
    if content > 1:
        polys = [TPoly(tuple(v // content for v in p.c)) for p in polys]
    first = next(p for p in polys if not p.is_zero)
    if first.lead < 0:
        polys = [-p for p in polys]
    return ProjPointFF(tuple(polys))


def ff_height(point: ProjPointFF) -> int:
    """Function-field height: maximum coordinate degree on a coprime tuple."""
    return max(p.degree for p in point.coords if not p.is_zero)
