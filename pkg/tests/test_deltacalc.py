from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from phivertex.deltacalc import (
    DeltaExpression,
    check_twist_commutes,
    classical_three_term,
    expand_delta,
    falling_twisted,
    mul_difference_power,
    residue_expression,
    substituted_three_term,
    to_plain,
    to_twisted,
    twist_derivative,
)
from phivertex.errors import StructuralError, WindowOverflow
from phivertex.series import LaurentPoly

W = ((-6, 6), (-6, 6))


def test_delta_kernel_coefficients():
    d = DeltaExpression.derivative(0, 0)
    # x1^-1 delta(x2/x1) = sum x2^n x1^(-n-1)
    for n in range(-5, 6):
        assert d.coefficient(-n - 1, n) == 1
    assert d.coefficient(0, 0) == 0


@given(st.integers(-2, 3), st.integers(0, 4), st.integers(-5, 5))
def test_twisted_falling_matches_repeated_derivative(eps, j, n):
    p = LaurentPoly.monomial(n, 1, "x2")
    for _ in range(j):
        p = LaurentPoly({e + eps - 1: c * e for e, c in p.items()}, "x2")
    assert p.coefficient(n + j * (eps - 1)) == falling_twisted(n, j, eps)


@pytest.mark.parametrize("eps", [-1, 0, 2])
def test_basis_roundtrip(eps):
    d = DeltaExpression(eps, ((0, LaurentPoly.monomial(1, 2, "x2")), (2, LaurentPoly.constant(Fraction(1, 3), "x2"))))
    back = to_twisted(to_plain(d))
    assert expand_delta(back, W) == expand_delta(d, W)
    assert expand_delta(to_plain(d), W) == expand_delta(d, W)


@pytest.mark.parametrize("eps", [-1, 0, 1, 3])
def test_twist_commutes(eps):
    d = DeltaExpression.derivative(eps, 2, LaurentPoly({0: 1, 2: -1}, "x2"))
    assert check_twist_commutes(d, W)
    assert twist_derivative(d).terms[-1][0] == 3


@pytest.mark.parametrize("eps", [-2, 0, 1, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_residue_values(eps, n):
    w = ((-8, 8), (n * eps - 8, n * eps + 8))
    assert residue_expression(eps, n, w) == LaurentPoly.monomial(n * eps, factorial(n), "x2")
    assert residue_expression(eps, n, w, scaled=True) == LaurentPoly.monomial(n * eps, 1, "x2")


def test_residue_outside_window():
    with pytest.raises(WindowOverflow):
        residue_expression(0, 1, ((3, 6), (0, 3)))


def test_difference_power_needs_nonnegative_exponent():
    with pytest.raises(StructuralError):
        mul_difference_power(DeltaExpression.derivative(0, 0), -1, W)


def test_three_term_identities_agree():
    for parts in (classical_three_term(3), substituted_three_term(3)):
        a, b, c = parts["a"], parts["b"], parts["c"]
        assert (a - b) == c
