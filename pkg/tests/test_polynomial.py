"""Exact polynomial arithmetic in t and the fraction-free linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynheight.linalg import det_int, det_tpoly, solve_exact
from dynheight.polynomial import TPoly, parse_tpoly

small_polys = st.lists(st.integers(-9, 9), min_size=0, max_size=5).map(TPoly)


def _det_fraction_oracle(rows):
    # Plain Gaussian elimination over Q: independent of the Bareiss route.
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            for j in range(c, n):
                m[i][j] -= f * m[c][j]
    return det


def test_parse_and_render():
    p = parse_tpoly("2*t^3 - t + 5")
    assert p.c == (5, -1, 0, 2)
    assert str(p) == "2*t^3 - t + 5"
    assert parse_tpoly("-t") == -TPoly.t()
    assert parse_tpoly("0").is_zero


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_tpoly("t^-1")
    with pytest.raises(ValueError):
        parse_tpoly("x + 1")
    with pytest.raises(ValueError):
        parse_tpoly("")


def test_eval_exact():
    p = parse_tpoly("t^2 + t")
    assert p.eval(Fraction(1, 2)) == Fraction(3, 4)
    assert p.eval(3) == 12


def test_divexact_and_gcd():
    a = parse_tpoly("t^2 - 1")
    b = parse_tpoly("t - 1")
    assert a.divexact(b) == parse_tpoly("t + 1")
    with pytest.raises(ArithmeticError):
        a.divexact(parse_tpoly("t - 2"))
    assert a.gcd(parse_tpoly("t^2 + 2*t + 1")) == parse_tpoly("t + 1")
    assert parse_tpoly("6*t").gcd(parse_tpoly("4*t^2")) == parse_tpoly("t")


@given(small_polys, small_polys, small_polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)


@given(small_polys, small_polys)
def test_gcd_divides(a, b):
    g = a.gcd(b)
    if not g.is_zero:
        a.divexact(g)
        b.divexact(g)  # would raise if not divisible


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_matches_fraction_oracle(rows):
    assert det_int(rows) == _det_fraction_oracle(rows)


def test_det_tpoly():
    t = TPoly.t()
    rows = [[t, TPoly.const(1)], [TPoly.const(1), t]]
    assert det_tpoly(rows) == parse_tpoly("t^2 - 1")


def test_solve_exact():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    b = [Fraction(5), Fraction(10)]
    x = solve_exact(a, b)
    assert x == [Fraction(1), Fraction(3)]
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert solve_exact(singular, b) is None


@given(
    st.lists(
        st.lists(st.fractions(max_denominator=7, min_value=-5, max_value=5), min_size=3, max_size=3),
        min_size=3,
        max_size=3,
    ),
    st.lists(st.fractions(max_denominator=7, min_value=-5, max_value=5), min_size=3, max_size=3),
)
def test_solve_residual_zero(a, b):
    x = solve_exact(a, b)
    if x is not None:
        for row, rhs in zip(a, b):
            assert sum(r * v for r, v in zip(row, x)) == rhs
