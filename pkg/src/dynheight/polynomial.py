"""Exact univariate polynomials over Z in the parameter t.

Polynomials are stored as coefficient tuples (c0, c1, ..., cd) with a
nonzero leading coefficient; the empty tuple is the zero polynomial.  The
class supports the exact operations the rest of the package needs: ring
arithmetic, evaluation at rationals, content and primitive part, exact
division, and gcd via the primitive pseudo-remainder sequence (which keeps
coefficients in Z instead of letting Euclid blow them up over Q).

Constants are units of Q(t), so normalizing a tuple of coordinates over
Q(t) only ever removes a common *polynomial* factor; integer content is a
separate, purely cosmetic normalization handled by callers.
"""

from __future__ import annotations

import math
import re

__all__ = ["TPoly", "parse_tpoly"]


class TPoly:
    """A polynomial in t with integer coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        for v in c:
            if not isinstance(v, int):
                raise TypeError(f"integer coefficient expected, got {type(v).__name__}")
        object.__setattr__(self, "c", tuple(c))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def const(cls, v: int) -> "TPoly":
        return cls((int(v),))

    @classmethod
    def t(cls) -> "TPoly":
        return cls((0, 1))

    # -- basic queries ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def is_zero(self) -> bool:
        return not self.c

    @property
    def is_constant(self) -> bool:
        return len(self.c) <= 1

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        return other is not None and self.c == other.c

    def __hash__(self) -> int:
        return hash(("TPoly", self.c))

    # -- ring arithmetic ---------------------------------------------------------

    def __neg__(self) -> "TPoly":
        return TPoly(tuple(-v for v in self.c))

    def __add__(self, other) -> "TPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return TPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "TPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "TPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return TPoly()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TPoly":
        if e < 0:
            raise ValueError("negative exponent")
        out = TPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- evaluation, content, division ----------------------------------------

    def eval(self, x):
        """Horner evaluation; the result type follows x (int or Fraction)."""
        acc = 0
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def content(self) -> int:
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for v in self.c:
            g = math.gcd(g, v)
        return g

    def primitive(self) -> "TPoly":
        """Divide out the content; the zero polynomial stays zero."""
        g = self.content()
        if g <= 1:
            return self
        return TPoly(tuple(v // g for v in self.c))

    def divexact(self, other: "TPoly | int") -> "TPoly":
        """Exact division; raises ArithmeticError when the remainder is nonzero."""
        other = _coerce(other)
        if other is None or other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return TPoly()
        rem = list(self.c)
        db, lb = other.degree, other.lead
        out = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            if rem[i] == 0:
                continue
            q, r = divmod(rem[i], lb)
            if r:
                raise ArithmeticError("inexact polynomial division")
            out[i - db] = q
            for j, bv in enumerate(other.c):
                rem[i - db + j] -= q * bv
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        return TPoly(out)

    def pseudo_rem(self, other: "TPoly") -> "TPoly":
        """Pseudo-remainder of lead(other)^(deg diff + 1) * self by other."""
        if other.is_zero:
            raise ZeroDivisionError("pseudo-remainder by zero")
        r = self
        d = other.degree
        lb = other.lead
        while not r.is_zero and r.degree >= d:
            shift = r.degree - d
            r = lb * r - r.lead * TPoly((0,) * shift + other.c)
        return r

    def gcd(self, other: "TPoly") -> "TPoly":
        """Primitive gcd in Z[t] with positive leading coefficient."""
        a, b = self.primitive(), _coerce(other).primitive()
        if a.is_zero:
            a, b = b, a
        while not b.is_zero:
            r = a.pseudo_rem(b)
            a, b = b, r.primitive()
        if a.is_zero:
            return a
        return a if a.lead > 0 else -a

    # -- rendering --------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for e in range(self.degree, -1, -1):
            v = self.c[e]
            if v == 0:
                continue
            mag = abs(v)
            if e == 0:
                body = str(mag)
            elif e == 1:
                body = "t" if mag == 1 else f"{mag}*t"
            else:
                body = f"t^{e}" if mag == 1 else f"{mag}*t^{e}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if v > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"TPoly({self.c!r})"


def _coerce(v) -> TPoly | None:
    if isinstance(v, TPoly):
        return v
    if isinstance(v, int):
        return TPoly((v,))
    return None


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([+\-*^]))")


def parse_tpoly(text: str) -> TPoly:
    """Parse an integer polynomial in t: literals, t, and the operators + - * ^.

    Exponents must be positive integer literals.  Example: "2*t^3 - t + 5".
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad character in polynomial at {text[pos:]!r}")
        if m.group(1):
            tokens.append(("int", m.group(1)))
        elif m.group(2):
            tokens.append(("var", "t"))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()

    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, None)

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def factor() -> TPoly:
        kind, val = peek()
        if kind == "int":
            take()
            base = TPoly.const(int(val))
        elif kind == "var":
            take()
            base = TPoly.t()
        else:
            raise ValueError("expected integer or t")
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "int" or int(val) < 1:
                raise ValueError("^ needs a positive integer exponent")
            base = base ** int(val)
        return base

    def term() -> TPoly:
        out = factor()
        while peek() == ("op", "*"):
            take()
            out = out * factor()
        return out

    def expr() -> TPoly:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        out = sign * term()
        while peek()[0] == "op" and peek()[1] in "+-":
            _, op = take()
            nxt = term()
            out = out + nxt if op == "+" else out - nxt
        return out

    if not tokens:
        raise ValueError("empty polynomial")
    out = expr()
    if idx != len(tokens):
        raise ValueError("trailing tokens in polynomial")
    return out
