"""Acceptance criteria, one marked group per criterion.

All comparisons are exact equalities over Fraction.  The terminal summary
prints one PASS/FAIL line per criterion.
"""
import time
from fractions import Fraction

import pytest

from phivertex import associate, deltacalc, liealg, phicoord, vacmod
from phivertex.liealg import LieAlgebraConfig, LieElement, bracket_basis
from phivertex.novikov import is_left_novikov
from phivertex.report import Verdict
from phivertex.vacmod import ModuleConfig, PBWVector

BOTH = ("frobenius1d", "noncomm2d")
LIE_SAMPLES = ("frobenius1d", "noncomm2d", "dual2d", "gelfand-euler", "gelfand-x2")


def crit(n, title):
    return pytest.mark.criterion(n, title)


# 1 -----------------------------------------------------------------------------

@crit(1, "associate axioms, eps -3..4, N = 8, under 10 s")
def test_associate_axioms():
    start = time.perf_counter()
    for eps in range(-3, 5):
        rep = associate.check_associate_axioms(eps, 8)
        assert rep, rep.witnesses[:2]
        assert rep.checked > 0
    assert time.perf_counter() - start < 10


# 2 -----------------------------------------------------------------------------

@crit(2, "closed form and coefficient formula, eps -3..4 without 1")
@pytest.mark.parametrize("eps", [e for e in range(-3, 5) if e != 1])
def test_closed_form(eps):
    assert associate.phi_closed(eps, 8) == associate.phi(eps, 8)
    rep = associate.check_closed_form(eps, 8)
    assert rep, rep.witnesses[:2]


# 3 -----------------------------------------------------------------------------

@crit(3, "h, g and f unit and factorization lemmas, eps -2..3")
@pytest.mark.parametrize("eps", range(-2, 4))
def test_unit_lemmas(eps):
    rep = associate.check_unit_lemmas(eps, 8)
    assert rep, rep.witnesses[:2]


# 4 -----------------------------------------------------------------------------

@crit(4, "delta facts on [-8,8]^2: vanishing, residue x2^(n eps)/n!, symmetry, under 30 s")
def test_delta_facts():
    start = time.perf_counter()
    for eps in range(-2, 4):
        assert deltacalc.check_vanishing(eps, 5, 8)
        assert deltacalc.check_delta_symmetry(eps, 8)
        assert deltacalc.check_residue_formula(eps, 5, 8, as_stated=False)
    assert time.perf_counter() - start < 30


@crit(4, "delta facts on [-8,8]^2: vanishing, residue x2^(n eps)/n!, symmetry, under 30 s")
@pytest.mark.parametrize("eps", range(-2, 4))
def test_residue_formula_with_inverse_factorial(eps):
    # The exact residue is n! x2^(n eps); with 1/n! this holds only for n <= 1.
    rep = deltacalc.check_residue_formula(eps, 5, 8, as_stated=True)
    assert rep, rep.witnesses[:2]


# 5 -----------------------------------------------------------------------------

@crit(5, "Lie axioms and cocycle for catalog algebras, eps -1..2, M = 4; non-Novikov witness")
@pytest.mark.parametrize("name", LIE_SAMPLES)
@pytest.mark.parametrize("eps", [-1, 0, 1, 2])
def test_lie_structure(catalog, name, eps):
    cfg = LieAlgebraConfig(catalog[name], eps)
    rep = liealg.verify_lie(cfg, 4)
    assert rep, rep.witnesses[:2]
    assert liealg.verify_cocycle(cfg, 4)


@crit(5, "Lie axioms and cocycle for catalog algebras, eps -1..2, M = 4; non-Novikov witness")
def test_non_novikov_fails_with_witness(catalog):
    A = catalog["broken2d"]
    assert not is_left_novikov(A)
    rep = liealg.verify_lie(LieAlgebraConfig(A, 0, with_center=False), 4)
    assert rep.verdict is Verdict.FAIL
    assert rep.witnesses and rep.witnesses[0]["identity"] == "jacobi"


# 6 -----------------------------------------------------------------------------

@crit(6, "Virasoro bracket from frobenius1d at eps = 0, |m|,|n| <= 5")
def test_virasoro(catalog):
    A = catalog["frobenius1d"]
    assert liealg.virasoro_check(LieAlgebraConfig(A, 0), 5)
    # with <e,e> = 1 the central element is the Virasoro one, symbol for symbol
    cfg = LieAlgebraConfig(A.with_form([[1]]), 0)
    for m in range(-5, 6):
        for n in range(-5, 6):
            central = Fraction(m ** 3 - m, 12) if m + n == 0 else 0
            want = LieElement({(0, m + n): m - n}, central)
            assert bracket_basis(cfg, 0, m, 0, n) == want


# 7 -----------------------------------------------------------------------------

@crit(7, "vacuum-module generator relations, levels 0, 1, -2, 1/2, G = 12")
@pytest.mark.parametrize("name", BOTH)
@pytest.mark.parametrize("level", [0, 1, -2, Fraction(1, 2)])
def test_generator_relations(catalog, name, level):
    rep = vacmod.check_generator_relations(ModuleConfig(catalog[name], 0, level, 12), 8)
    assert rep, rep.witnesses[:2]
    assert not rep.overflow


# 8 -----------------------------------------------------------------------------

@crit(8, "grading law deg(u_k v) = deg u + deg v - k - 1, degree <= 8, |k| <= 6")
@pytest.mark.parametrize("name", BOTH)
def test_grading(catalog, name):
    rep = vacmod.grading_check(ModuleConfig(catalog[name], 0, 1, 12), max_degree=8, kmax=6)
    assert rep, rep.witnesses[:2]
    assert rep.checked > 0 and not rep.overflow


# 9 -----------------------------------------------------------------------------

@crit(9, "Novikov product and scaled form recovered from V_2, levels 1 and 2")
@pytest.mark.parametrize("name", BOTH + ("dual2d",))
@pytest.mark.parametrize("level", [1, 2])
def test_recovery(catalog, name, level):
    rep = vacmod.check_recovery(ModuleConfig(catalog[name], 0, level, 12))
    assert rep, rep.witnesses[:2]


# 10 ----------------------------------------------------------------------------

@crit(10, "Moebius criterion at M = 4 and sl2 derivation checks")
def test_moebius(catalog):
    good = vacmod.mobius_check(ModuleConfig(catalog["frobenius1d"], 0, 1, 12), 4)
    assert good.verdict is Verdict.PASS and good.data["compatible"]
    bad = vacmod.mobius_check(ModuleConfig(catalog["noncomm2d"], 0, 1, 12), 4)
    assert bad.verdict is Verdict.EXPECTED_NEGATIVE and not bad.data["compatible"]
    for name in ("frobenius1d", "dual2d"):
        assert liealg.sl2_derivations(catalog[name], 4)


# 11 ----------------------------------------------------------------------------

@crit(11, "commutator formula on |p|,|q| <= 6, eps -1..2, levels 0 and 1, under 60 s")
def test_commutator_formula(catalog):
    start = time.perf_counter()
    for name in BOTH:
        for eps in (-1, 0, 1, 2):
            for level in (0, 1):
                rep = phicoord.check_commutator_formula(catalog[name], eps, level, 6)
                assert rep, (name, eps, level, rep.witnesses[:2])
                assert rep.checked >= 13 * 13
    assert time.perf_counter() - start < 60


# 12 ----------------------------------------------------------------------------

@crit(12, "phi-coordinated module axiom on vacuum and depth 2, N = 6, G = 10; Jacobi and Res_z")
@pytest.mark.parametrize("name", BOTH)
@pytest.mark.parametrize("eps", [0, 1, 2])
def test_phi_module_axiom(catalog, name, eps):
    A = catalog[name]
    mod = phicoord.PhiModule(A, eps, 1, 10)
    vectors = [PBWVector.vacuum(), phicoord.depth_two_vector(mod)]
    for a in range(A.dim):
        for b in range(A.dim):
            for w in vectors:
                rep = phicoord.check_phi_module_axiom(mod, a, b, w, 6)
                assert rep, (a, b, w, rep.witnesses[:2])
                assert not rep.overflow


@crit(12, "phi-coordinated module axiom on vacuum and depth 2, N = 6, G = 10; Jacobi and Res_z")
@pytest.mark.parametrize("name", BOTH)
@pytest.mark.parametrize("eps", [0, 1, 2])
def test_jacobi_type(catalog, name, eps):
    A = catalog[name]
    com = phicoord.check_commutator_formula(A, eps, 1, 6)
    mod = phicoord.PhiModule(A, eps, 1, 10)
    for w in (PBWVector.vacuum(), phicoord.depth_two_vector(mod)):
        rep = phicoord.jacobi_type_check(mod, 0, A.dim - 1, w, order=4, window=5, commutator=com)
        assert rep, rep.witnesses[:2]
        assert not rep.overflow


# 13 ----------------------------------------------------------------------------

@crit(13, "eps = 0 phi-coordinated results coincide with the classical module identities")
@pytest.mark.parametrize("name", BOTH + ("dual2d",))
def test_degeneration(catalog, name):
    rep = phicoord.degeneration_check(catalog[name], 1, 8)
    assert rep, rep.witnesses[:2]
    assert rep.checked > 0
