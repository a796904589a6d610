from fractions import Fraction

import pytest

import phivertex.phicoord as pc
from phivertex import catalog
from phivertex.errors import DomainError, LocalityError, WindowOverflow
from phivertex.liealg import LieAlgebraConfig
from phivertex.phicoord import (
    PhiModule,
    YEProduct,
    check_commutator_formula,
    check_phi_module_axiom,
    check_tables,
    check_ye_homomorphism,
    commutator_lhs,
    commutator_rhs,
    depth_two_vector,
    jacobi_type_check,
    ye_product,
)
from phivertex.series import binomial
from phivertex.vacmod import PBWVector


@pytest.mark.parametrize("eps", [-2, 0, 1, 2, 3])
def test_tables_match_associate_series(eps):
    assert check_tables(eps, 6)


def test_eps0_tables_are_classical():
    for p in range(-4, 5):
        assert list(pc.mu_table(0, p, 5)) == [binomial(p, r) for r in range(6)]
    assert pc.h_power_table(0, -4, 5) == (1, 0, 0, 0, 0, 0)


def test_module_checks_need_graded_w():
    with pytest.raises(DomainError):
        PhiModule(catalog.noncomm2d(), -1)
    with pytest.raises(DomainError):
        PhiModule(catalog.noncomm2d(), 3)


@pytest.mark.parametrize("eps", [0, 1, 2])
def test_high_products_vanish(eps):
    mod = PhiModule(catalog.noncomm2d(), eps, 1, 8)
    w = depth_two_vector(mod)
    for j in (4, 5, 8):
        assert all(v.is_zero() for v in ye_product(mod, 0, 1, j, w).values())


@pytest.mark.parametrize("eps", [0, 1, 2])
@pytest.mark.parametrize("level", [1, Fraction(1, 2)])
def test_third_product_is_central(eps, level):
    A = catalog.dual2d()
    mod = PhiModule(A, eps, level, 8)
    w = PBWVector.vacuum()
    for a in range(2):
        for b in range(2):
            out = ye_product(mod, a, b, 3, w)
            scalar = Fraction(level) / 2 * A.pair(A.unit_vector(a), A.unit_vector(b))
            for e, v in out.items():
                assert v == (w * scalar if e == 0 else PBWVector())


def test_first_product_is_anticommutator_field():
    A = catalog.noncomm2d()
    mod = PhiModule(A, 2, 1, 8)
    w = depth_two_vector(mod)
    ab_ba = [x + y for x, y in zip(A.mul(A.unit_vector(0), A.unit_vector(1)),
                                   A.mul(A.unit_vector(1), A.unit_vector(0)))]
    for e, v in ye_product(mod, 0, 1, 1, w).items():
        want = PBWVector()
        for k, c in enumerate(ab_ba):
            want = want + mod.fields.generator(k).coeff(e, w.items()[0][0]) * c
        assert v == want


def test_wrong_locality_order_is_detected():
    mod = PhiModule(catalog.frobenius1d(), 1, 1, 8)
    bad = YEProduct(mod.fields.generator(0), mod.fields.generator(0), 0, k=1)
    with pytest.raises(LocalityError):
        for e in range(-4, 6):
            bad.coeff(e, ())


def test_small_cap_overflows():
    mod = PhiModule(catalog.noncomm2d(), 0, 1, degree_cap=10, slack=-8)
    with pytest.raises(WindowOverflow):
        ye_product(mod, 0, 1, 0, PBWVector.vacuum())


def test_mutated_substitution_fails(monkeypatch):
    # using the eps = 0 coordinate change for an eps = 2 module must break the axiom
    real = pc.mu_table
    monkeypatch.setattr(pc, "mu_table", lambda eps, p, n: real(0, p, n))
    mod = PhiModule(catalog.noncomm2d(), 2, 1, 8)
    assert not check_phi_module_axiom(mod, 0, 1, depth_two_vector(mod), 4)


def test_commutator_negative_control():
    lie = LieAlgebraConfig(catalog.noncomm2d(), 1)
    assert any(commutator_lhs(lie, 0, 1, p, q) != commutator_rhs(lie, 1, 0, p, q)
               for p in range(-3, 4) for q in range(-3, 4))


def test_commutator_level_zero_has_no_central_terms():
    rep = check_commutator_formula(catalog.frobenius1d(), 2, 0, 4)
    assert rep
    assert all(u.central == 0 for u in rep.data.values())


def test_ye_homomorphism_on_depth_two():
    mod = PhiModule(catalog.noncomm2d(), 1, 1, 8)
    assert check_ye_homomorphism(mod, depth_two_vector(mod), jmax=5)


def test_jacobi_reduction_uses_commutator_data():
    A = catalog.dual2d()
    com = check_commutator_formula(A, 1, 1, 3)
    mod = PhiModule(A, 1, 1, 8)
    rep = jacobi_type_check(mod, 1, 0, PBWVector.vacuum(), order=2, window=3, commutator=com)
    assert rep
