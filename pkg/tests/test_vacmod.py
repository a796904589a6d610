from fractions import Fraction
import pytest
from hypothesis import given, strategies as st

from phivertex import catalog
from phivertex.errors import DomainError, StructuralError
from phivertex.liealg import bracket_basis
from phivertex.series import binomial
from phivertex.vacmod import (
    ModuleConfig,
    PBWVector,
    act,
    act_element,
    apply_letters,
    d_operator,
    d_operator_oracle,
    normal_form,
    pbw_monomials,
    vertex_mode,
    word_degree,
)

CFG = {name: ModuleConfig(fn(), 0, 1, 14) for name, fn in
       (("noncomm2d", catalog.noncomm2d), ("dual2d", catalog.dual2d))}
letters = st.tuples(st.integers(0, 1), st.integers(-4, 2))
words = st.sampled_from([w for d in range(0, 5) for w in pbw_monomials(2, d)])


@pytest.mark.parametrize("name", list(CFG))
@given(g=letters, h=letters, w=words)
def test_act_is_a_representation(name, g, h, w):
    cfg = CFG[name]
    v = PBWVector.word(w)
    lhs = act(cfg, g, act(cfg, h, v)) - act(cfg, h, act(cfg, g, v))
    rhs = act_element(cfg, bracket_basis(cfg.lie, g[0], g[1], h[0], h[1]), v)
    assert lhs == rhs


@given(st.lists(letters, min_size=2, max_size=4))
def test_pbw_confluence(ls):
    cfg = CFG["noncomm2d"]
    # swapping two adjacent letters changes the result by the bracket
    swapped = [ls[1], ls[0]] + ls[2:]
    br = bracket_basis(cfg.lie, ls[0][0], ls[0][1], ls[1][0], ls[1][1])
    rest = apply_letters(cfg, ls[2:], PBWVector.vacuum())
    assert normal_form(cfg, ls) - normal_form(cfg, swapped) == act_element(cfg, br, rest)


def test_normal_form_is_sorted_and_annihilates():
    cfg = CFG["dual2d"]
    # [L(e1,-2), L(e2,-3)] = (-1) L(e2,-5) - (-2) L(e2,-5) = L(e2,-5)
    want = PBWVector.word(((1, -3), (0, -2))) + PBWVector.word(((1, -5),))
    assert normal_form(cfg, [(0, -2), (1, -3)]) == want
    assert normal_form(cfg, [(0, 5)]).is_zero()
    assert normal_form(cfg, [(0, -1)]).is_zero()


def test_center_acts_by_level():
    cfg = ModuleConfig(catalog.noncomm2d(), 0, Fraction(1, 2))
    v = PBWVector.word(((0, -3),))
    assert act(cfg, "c", v) == v * Fraction(1, 2)


def test_domain_restrictions():
    with pytest.raises(DomainError):
        ModuleConfig(catalog.noncomm2d(), -1)
    with pytest.raises(DomainError):
        ModuleConfig(catalog.noncomm2d(), 3)
    with pytest.raises(StructuralError):
        ModuleConfig(catalog.broken2d(), 0)


@given(u=words, w=words, k=st.integers(-3, 4))
def test_grading_of_modes(u, w, k):
    cfg = CFG["noncomm2d"]
    out = vertex_mode(cfg, PBWVector.word(u), k, PBWVector.word(w))
    if not out.overflow:
        assert out.degrees() <= {word_degree(u) + word_degree(w) - k - 1}


@given(u=words)
def test_vacuum_and_creation(u):
    cfg = CFG["dual2d"]
    v = PBWVector.word(u)
    assert vertex_mode(cfg, v, -1, PBWVector.vacuum()) == v
    assert vertex_mode(cfg, PBWVector.vacuum(), -1, v) == v
    assert d_operator(cfg, v) == d_operator_oracle(cfg, v)
    assert d_operator(cfg, v) == vertex_mode(cfg, v, -2, PBWVector.vacuum())


@pytest.mark.parametrize("name", list(CFG))
def test_u1v_symmetry_on_the_algebra(name):
    # u_1 v = v_1 u = uv + vu for u, v in the degree-2 copy of the algebra
    cfg = CFG[name]
    gens = [cfg.generator(0), cfg.generator(1), cfg.generator(0) * 2 - cfg.generator(1)]
    for u in gens:
        for v in gens:
            assert vertex_mode(cfg, u, 1, v) == vertex_mode(cfg, v, 1, u)


def test_skew_symmetry_mode_zero():
    # a_0 b = -b_0 a + D(b_1 a)
    cfg = CFG["noncomm2d"]
    a, b = cfg.generator(0), cfg.generator(1)
    lhs = vertex_mode(cfg, a, 0, b)
    rhs = -vertex_mode(cfg, b, 0, a) + d_operator(cfg, vertex_mode(cfg, b, 1, a))
    assert lhs == rhs


@given(m=st.integers(-3, 2), n=st.integers(-3, 2), u=st.sampled_from([((0, -2),), ((1, -3),), ((1, -2), (0, -2))]),
       w=words)
def test_borcherds_commutator(m, n, u, w):
    cfg = ModuleConfig(catalog.noncomm2d(), 0, 1, 16)
    a = cfg.generator(0)
    uu, ww = PBWVector.word(u), PBWVector.word(w)
    lhs = vertex_mode(cfg, a, m, vertex_mode(cfg, uu, n, ww)) - vertex_mode(cfg, uu, n, vertex_mode(cfg, a, m, ww))
    rhs = PBWVector()
    for i in range(word_degree(u) + 2):  # a_i u = 0 beyond deg u + 1
        rhs = rhs + vertex_mode(cfg, vertex_mode(cfg, a, i, uu), m + n - i, ww) * binomial(m, i)
    assert not (lhs.overflow or rhs.overflow)
    assert lhs == rhs


def test_generator_mode_is_lie_mode():
    # a_n = L(a, n - 1) on any vector
    cfg = CFG["dual2d"]
    w = PBWVector.word(((1, -3), (0, -2)))
    for n in range(-3, 4):
        assert vertex_mode(cfg, cfg.generator(1), n, w) == act(cfg, (1, n - 1), w)
