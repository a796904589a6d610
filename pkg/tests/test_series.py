from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from phivertex.errors import NotAUnit, StructuralError, TruncationMismatch, WindowOverflow
from phivertex.series import (
    IteratedSeries,
    LaurentPoly,
    apply_derivation,
    binomial,
    series_invert,
    series_power,
    substitute,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.dictionaries(st.integers(-4, 4), rationals, max_size=4).map(LaurentPoly)

X = LaurentPoly.monomial(1)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == LaurentPoly()
    assert p * 1 == p


@given(polys, polys, st.integers(-2, 3))
def test_twisted_derivation_rule(p, q, eps):
    lhs = apply_derivation(p * q, eps)
    rhs = apply_derivation(p, eps) * q + p * apply_derivation(q, eps)
    assert lhs == rhs


@given(st.integers(-6, 6), rationals.filter(bool), st.integers(-3, 3))
def test_monomial_powers(e, c, k):
    m = LaurentPoly.monomial(e, c)
    assert m ** k == LaurentPoly.monomial(e * k, c ** k)


def test_non_monomial_inverse_overflows():
    with pytest.raises(WindowOverflow):
        (X + 1) ** -1


def test_binomial_general_exponent():
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(-1, 3) == -1
    assert binomial(5, 7) == 0


def _unit(coeffs, order=6):
    terms = {(0,): LaurentPoly.monomial(2, 3)}
    for k, c in enumerate(coeffs, start=1):
        terms[(k,)] = LaurentPoly({-1: c, 1: c + 1})
    return IteratedSeries(terms, ("z",), order)


@given(st.lists(rationals, min_size=1, max_size=4))
def test_inverse_of_inverse(coeffs):
    s = _unit(coeffs)
    inv = series_invert(s)
    assert s * inv == IteratedSeries({(0,): 1}, ("z",), 6)
    assert series_invert(inv) == s


@given(st.lists(rationals, min_size=1, max_size=3), st.integers(-3, 3), st.integers(-3, 3))
def test_power_law(coeffs, a, b):
    s = _unit(coeffs, 5)
    assert series_power(s, a) * series_power(s, b) == series_power(s, a + b)


def test_zero_constant_is_not_a_unit():
    z = IteratedSeries.variable("z", ("z",), 4)
    with pytest.raises(NotAUnit):
        series_invert(z)


def test_orders_must_agree_for_comparison():
    a = IteratedSeries({(0,): 1}, ("z",), 3)
    b = IteratedSeries({(0,): 1}, ("z",), 4)
    with pytest.raises(TruncationMismatch):
        a == b


def test_truncation_is_by_total_degree():
    s = IteratedSeries({(2, 2): 1, (1, 1): 1}, ("u", "v"), 3)
    assert (2, 2) not in s.coeffs
    with pytest.raises(TruncationMismatch):
        s.coefficient((2, 2))  # unknown, not zero
    assert s.coefficient({"u": 1, "v": 1}) == LaurentPoly.constant(1)


def test_window_consistency_under_substitution():
    # substituting z -> z + z^2 into 1/(1 - z) truncated at 6, then truncating to 4, equals
    # the same computation done at order 4
    def geo(n):
        return IteratedSeries({(k,): 1 for k in range(n + 1)}, ("z",), n)

    def shift(n):
        z = IteratedSeries.variable("z", ("z",), n)
        return z + z * z

    big = substitute(geo(6), "z", shift(6)).truncate(4)
    small = substitute(geo(4), "z", shift(4))
    assert big == small


def test_base_substitution_expands_negative_powers():
    # x^-1 at x -> x(1 + z) is x^-1 (1 - z + z^2 - ...)
    s = IteratedSeries.from_laurent(LaurentPoly.monomial(-1), ("z",), 5)
    t = IteratedSeries({(0,): X, (1,): X}, ("z",), 5)
    out = substitute(s, "x", t)
    for k in range(6):
        assert out.coefficient((k,)) == LaurentPoly.monomial(-1, (-1) ** k)


def test_bad_construction():
    with pytest.raises(StructuralError):
        IteratedSeries({(1,): 1}, ("z", "z"))
    with pytest.raises(StructuralError):
        IteratedSeries({(-1,): 1}, ("z",))
