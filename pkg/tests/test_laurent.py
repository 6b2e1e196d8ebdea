from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cclab.laurent import LaurentError, LaurentPolynomial, monomial, parse_laurent, to_text

N = 3

exponents = st.tuples(*[st.integers(-3, 3)] * N)
polys = st.dictionaries(exponents, st.integers(-5, 5), max_size=5).map(lambda d: LaurentPolynomial(N, d))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPolynomial.zero(N)
    assert a * 1 == a


@given(polys)
def test_print_parse_roundtrip(a):
    assert parse_laurent(to_text(a), N) == a


@given(polys, st.lists(st.fractions(min_value=-3, max_value=3).filter(bool), min_size=N, max_size=N),
       polys)
def test_evaluation_is_a_homomorphism(a, pt, b):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@given(exponents)
def test_monomial_inverse(v):
    m = monomial(v)
    assert m * m ** -1 == LaurentPolynomial.one(N)


def test_inverse_of_non_monomial_fails():
    x = LaurentPolynomial.variable(2, 0)
    with pytest.raises(LaurentError):
        (x + 1) ** -1
    with pytest.raises(LaurentError):
        monomial((1, 0), 2) ** -1


def test_canonical_text():
    p = parse_laurent("x2^-1 + x1^2*x2^-1", 2)
    assert to_text(p) == "x1^2*x2^-1 + x2^-1"
    assert to_text(parse_laurent("1 - 3*x1*x2", 2)) == "-3*x1*x2 + 1"
    assert to_text(LaurentPolynomial.zero(2)) == "0"


def test_rejects_bad_input():
    for bad in ["", "x3", "y1", "x1**2", "2x1"]:
        with pytest.raises(LaurentError):
            parse_laurent(bad, 2)
    with pytest.raises(LaurentError):
        LaurentPolynomial(2, {(1, 0): Fraction(1, 2)})
    with pytest.raises(LaurentError):
        LaurentPolynomial(2, {(1,): 1})
    with pytest.raises(LaurentError):
        LaurentPolynomial.one(2) + LaurentPolynomial.one(3)


def test_kronecker_exchange_relation_gives_band_character(kcat):
    from cclab.cc import cc_module

    x1, x2 = (LaurentPolynomial.variable(2, i) for i in range(2))
    # x0 and x3 from the two exchange relations x0 x2 = x1^2 + 1, x1 x3 = x2^2 + 1
    x0 = (x1 * x1 + 1) * x2 ** -1
    x3 = (x2 * x2 + 1) * x1 ** -1
    assert x0 * x3 - x1 * x2 == cc_module(kcat.get("u[0](1)"))
