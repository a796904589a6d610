from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from phivertex import catalog
from phivertex.errors import DomainError, StructuralError
from phivertex.liealg import (
    LieAlgebraConfig,
    LieElement,
    TensorLie,
    bracket,
    bracket_basis,
    cocycle,
    cocycle_polynomial_identity,
    sl2_apply,
    sl2_derivations,
    theta_isomorphism_check,
    verify_family,
    verify_lie,
)

modes = st.integers(-4, 4)


def _element(draw_terms, dim):
    return LieElement({(i % dim, m): c for (i, m), c in draw_terms.items()})


terms = st.dictionaries(st.tuples(st.integers(0, 1), modes), st.integers(-3, 3), max_size=3)


@given(terms, terms, terms, st.sampled_from([-1, 0, 1, 2]))
def test_bilinear_antisymmetric_jacobi_noncomm2d(t1, t2, t3, eps):
    cfg = LieAlgebraConfig(catalog.noncomm2d(), eps)
    u, v, w = (_element(t, 2) for t in (t1, t2, t3))
    assert bracket(cfg, u, v) == -bracket(cfg, v, u)
    assert bracket(cfg, u + v, w) == bracket(cfg, u, w) + bracket(cfg, v, w)
    jac = (bracket(cfg, bracket(cfg, u, v), w) + bracket(cfg, bracket(cfg, v, w), u)
           + bracket(cfg, bracket(cfg, w, u), v))
    assert jac.is_zero()


def test_bracket_formula_on_basis():
    cfg = LieAlgebraConfig(catalog.frobenius1d(), 1)
    # (m+1-eps) L(ab, m+n) - (n+1-eps) L(ba, m+n) + central
    got = bracket_basis(cfg, 0, 3, 0, -3)
    central = Fraction(1, 12) * 3 * 3 * 3 * Fraction(1, 12)
    assert got == LieElement({(0, 0): 3 - (-3)}, central)


def test_center_needs_form():
    with pytest.raises(StructuralError):
        LieAlgebraConfig(catalog.broken2d(), 0, with_center=True)


def test_cocycle_polynomial_identity():
    assert cocycle_polynomial_identity()


def test_cocycle_is_supported_on_opposite_modes():
    cfg = LieAlgebraConfig(catalog.dual2d(), 2)
    assert cocycle(cfg, LieElement.basis(0, 2), LieElement.basis(1, -1)) == 0
    assert cocycle(cfg, LieElement.basis(0, 2), LieElement.basis(1, -2)) != 0


def test_broken_algebra_fails_jacobi():
    cfg = LieAlgebraConfig(catalog.broken2d(), 0, with_center=False)
    rep = verify_lie(cfg, 2)
    assert not rep
    assert rep.witnesses[0]["identity"] == "jacobi"


@pytest.mark.parametrize("family", ["poisson", "virasoro_like", ("block", 2), ("block", -1)])
def test_indexed_families(family):
    assert verify_family(family, 2)


def test_tensor_construction():
    K = catalog.truncated_polynomial(3)
    T = TensorLie(catalog.noncomm2d(), K, catalog.euler_derivation(3))
    assert T.verify_jacobi()
    with pytest.raises(DomainError):
        TensorLie(catalog.broken2d(), K, catalog.euler_derivation(3))


def test_sl2_mode_action():
    u = LieElement.basis(0, 3)
    assert sl2_apply(-1, u) == LieElement.basis(0, 2, -4)
    assert sl2_apply(0, u) == LieElement.basis(0, 3, -3)
    assert sl2_apply(1, u) == LieElement.basis(0, 4, -2)


def test_sl2_derivations_need_commutativity():
    with pytest.raises(DomainError):
        sl2_derivations(catalog.noncomm2d())
    rep = sl2_derivations(catalog.noncomm2d(), M=2, require_commutative=False)
    assert not rep
    assert sl2_derivations(catalog.dual2d(), M=3)


def test_theta_for_commutative_only():
    assert theta_isomorphism_check(catalog.dual2d(), 2, 3)
    with pytest.raises(DomainError):
        theta_isomorphism_check(catalog.noncomm2d(), 1)
