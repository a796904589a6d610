from fractions import Fraction

import pytest

from phivertex.associate import (
    check_closed_form,
    check_unit_lemmas,
    f_inverse,
    g_diagonal_as_stated,
    g_series,
    h_series,
    phi,
    phi_closed,
    phi_coefficient_formula,
)
from phivertex.errors import DomainError
from phivertex.series import LaurentPoly, substitute


def test_eps0_is_translation():
    s = phi(0, 5).series
    assert s.coefficient((0,)) == LaurentPoly.monomial(1)
    assert s.coefficient((1,)) == LaurentPoly.constant(1)
    for k in range(2, 6):
        assert s.coefficient((k,)).is_zero()


def test_eps1_is_dilation():
    # e^{z x d/dx} x = x e^z
    s = phi(1, 6).series
    for k in range(7):
        c = phi_coefficient_formula(1, k)
        assert s.coefficient((k,)) == c == LaurentPoly.monomial(1, Fraction(1, _fact(k)))


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def test_eps2_geometric():
    # x / (1 - z x)
    for k in range(7):
        assert phi_coefficient_formula(2, k) == LaurentPoly.monomial(k + 1)


def test_closed_form_undefined_at_eps1():
    with pytest.raises(DomainError):
        phi_closed(1, 4)


@pytest.mark.parametrize("eps", [-1, 0, 2])
def test_closed_form_report(eps):
    assert check_closed_form(eps, 6)


def test_h_constant_term_is_x_eps():
    for eps in range(-2, 4):
        assert h_series(eps, 5).constant_term() == LaurentPoly.monomial(eps)


def test_g_constant_term_is_x_eps_not_x():
    g = g_series(2, 4)
    assert g.constant_term() == LaurentPoly.monomial(2)
    assert g.constant_term() != LaurentPoly.monomial(1)


def test_g_diagonal_is_phi_only_at_eps1():
    assert g_diagonal_as_stated(1, 5)
    for eps in (-1, 0, 2, 3):
        assert not g_diagonal_as_stated(eps, 5)


@pytest.mark.parametrize("eps", [-2, 0, 1, 3])
def test_f_inverts_phi(eps):
    f = f_inverse(eps, 6)
    comp = substitute(phi(eps, 6).series, "z", f)
    assert comp.coefficient((0,)) == LaurentPoly.monomial(1)
    assert comp.coefficient((1,)) == LaurentPoly.monomial(1)
    for k in range(2, 7):
        assert comp.coefficient((k,)).is_zero()


def test_unit_lemmas_small_order():
    rep = check_unit_lemmas(2, 4)
    assert rep, rep.witnesses
