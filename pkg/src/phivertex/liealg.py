"""Affinized Lie algebras of Novikov algebras.

Elements are spanned by symbols L^eps(a, m) (a a basis index, m an integer
mode) plus the central element c.  The bracket is

    [L(a,m), L(b,n)] = (m+1-eps) L(ab, m+n) - (n+1-eps) L(ba, m+n)
                       + (1/12)(m+1-eps) m (m-1+eps) <a,b> delta_{m+n,0} c.

Mode symbols are the canonical storage; a (x) t^(m+1-eps) is only a view.
Degrees are deg L(a,m) = -m for every eps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product as _cartesian
from typing import Iterable

import sympy

from .errors import DomainError, StructuralError
from .novikov import (
    AlgebraSpec,
    IndexedAlgebra,
    check_derivation,
    check_form,
    is_commutative_associative,
    is_left_novikov,
    laurent_novikov,
)
from .report import Report, timed
from .series import LaurentPoly


class LieElement:
    """Finite combination of L(a, m) plus a multiple of the central element."""

    __slots__ = ("_terms", "central")

    def __init__(self, terms=None, central=0):
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(key[0], int(key[1]))] = c
        self._terms = clean
        self.central = Fraction(central)

    @classmethod
    def basis(cls, index, mode, coeff=1):
        return cls({(index, mode): coeff})

    @classmethod
    def center(cls, coeff=1):
        return cls({}, coeff)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms and not self.central

    def __add__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LieElement(out, self.central + other.central)

    def __neg__(self):
        return LieElement({k: -c for k, c in self._terms.items()}, -self.central)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return LieElement({k: v * c for k, v in self._terms.items()}, self.central * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self._terms == other._terms and self.central == other.central

    def __hash__(self):
        return hash((frozenset(self._terms.items()), self.central))

    def __repr__(self):
        parts = [f"{c}*L({i},{m})" for (i, m), c in self.items()]
        if self.central:
            parts.append(f"{self.central}*c")
        return " + ".join(parts) if parts else "0"


def basis_product(algebra, i, j) -> dict:
    """e_i e_j as {index: coefficient} for either kind of algebra."""
    if isinstance(algebra, IndexedAlgebra):
        return {k: Fraction(c) for k, c in algebra.product_rule(i, j).items() if c}
    row = algebra.product[i][j]
    return {k: c for k, c in enumerate(row) if c}


@dataclass(frozen=True)
class LieAlgebraConfig:
    algebra: object  # AlgebraSpec or IndexedAlgebra
    epsilon: int = 0
    with_center: bool = True

    def __post_init__(self):
        if self.with_center:
            if not isinstance(self.algebra, AlgebraSpec) or self.algebra.form is None:
                raise StructuralError("a central extension needs an algebra with a bilinear form")
            rep = check_form(self.algebra)
            if not rep:
                raise DomainError("form is not invariant", rep.witnesses[:1])

    @property
    def indices(self):
        if isinstance(self.algebra, AlgebraSpec):
            return tuple(range(self.algebra.dim))
        raise StructuralError("indexed algebras have no finite basis; pass an index window")

    def form(self, i, j) -> Fraction:
        return self.algebra.form[i][j]


def bracket_basis(cfg: LieAlgebraConfig, a, m: int, b, n: int) -> LieElement:
    eps = cfg.epsilon
    ca, cb = m + 1 - eps, n + 1 - eps
    out: dict = {}
    if ca:
        for k, c in basis_product(cfg.algebra, a, b).items():
            out[(k, m + n)] = out.get((k, m + n), 0) + ca * c
    if cb:
        for k, c in basis_product(cfg.algebra, b, a).items():
            out[(k, m + n)] = out.get((k, m + n), 0) - cb * c
    central = Fraction(0)
    if cfg.with_center and m + n == 0:
        central = Fraction(ca * m * (m - 1 + eps), 12) * cfg.form(a, b)
    return LieElement(out, central)


def bracket(cfg: LieAlgebraConfig, u: LieElement, v: LieElement) -> LieElement:
    out = LieElement()
    for (a, m), cu in u._terms.items():
        for (b, n), cv in v._terms.items():
            out = out + bracket_basis(cfg, a, m, b, n) * (cu * cv)
    if not cfg.with_center:
        out = LieElement(out._terms, 0)
    return out


def cocycle(cfg: LieAlgebraConfig, u: LieElement, v: LieElement) -> Fraction:
    return bracket(cfg, u, v).central


def _generators(cfg, M, indices=None):
    idx = indices if indices is not None else cfg.indices
    return [(a, m) for a in idx for m in range(-M, M + 1)]


def verify_lie(cfg: LieAlgebraConfig, M: int = 4, indices: Iterable | None = None) -> Report:
    """Antisymmetry and Jacobi on basis generators with |mode| <= M.

    Jacobi is totally antisymmetric once antisymmetry holds, so unordered
    triples suffice.
    """
    gens = _generators(cfg, M, list(indices) if indices is not None else None)
    rep = Report("lie", "lie-bracket", {"eps": cfg.epsilon, "center": cfg.with_center, "M": M},
                 window={"M": M})
    with timed(rep):
        els = [LieElement.basis(a, m) for a, m in gens]
        for (g1, u), (g2, v) in combinations_with_replacement(list(zip(gens, els)), 2):
            s = bracket(cfg, u, v) + bracket(cfg, v, u)
            rep.record(s.is_zero(), {"identity": "antisymmetry", "pair": (g1, g2), "residual": repr(s)})
        cache = {}

        def br(i, j):
            if (i, j) not in cache:
                cache[(i, j)] = bracket(cfg, els[i], els[j])
            return cache[(i, j)]

        for i, j, k in combinations_with_replacement(range(len(els)), 3):
            J = (bracket(cfg, br(i, j), els[k]) + bracket(cfg, br(j, k), els[i])
                 + bracket(cfg, br(k, i), els[j]))
            rep.record(J.is_zero(), {"identity": "jacobi", "triple": (gens[i], gens[j], gens[k]),
                                     "residual": repr(J)})
    return rep


def cocycle_polynomial_identity() -> bool:
    """(m^2-n^2)(k^2-s^2) + (n^2-k^2)(m^2-s^2) + (k^2-m^2)(n^2-s^2) == 0 with s = 1-eps."""
    m, n, k, s = sympy.symbols("m n k s")
    expr = ((m**2 - n**2) * (k**2 - s**2) + (n**2 - k**2) * (m**2 - s**2)
            + (k**2 - m**2) * (n**2 - s**2))
    return sympy.expand(expr) == 0


def verify_cocycle(cfg: LieAlgebraConfig, M: int = 4) -> Report:
    if not cfg.with_center:
        raise StructuralError("cocycle checks need the central extension")
    rep = Report("lie", "two-cocycle", {"eps": cfg.epsilon, "M": M}, window={"M": M})
    bare = LieAlgebraConfig(cfg.algebra, cfg.epsilon, with_center=False)
    with timed(rep):
        gens = _generators(cfg, M)
        els = {g: LieElement.basis(*g) for g in gens}
        for g1, g2 in _cartesian(gens, repeat=2):
            w1 = cocycle(cfg, els[g1], els[g2])
            rep.record(w1 == -cocycle(cfg, els[g2], els[g1]), {"identity": "skew", "pair": (g1, g2)})
            if g1[1] + g2[1] != 0:
                rep.record(w1 == 0, {"identity": "diagonal-support", "pair": (g1, g2)})
        for g1, g2, g3 in combinations_with_replacement(gens, 3):
            u, v, w = els[g1], els[g2], els[g3]
            total = (cocycle(cfg, bracket(bare, u, v), w) + cocycle(cfg, bracket(bare, v, w), u)
                     + cocycle(cfg, bracket(bare, w, u), v))
            rep.record(total == 0, {"identity": "cocycle", "triple": (g1, g2, g3), "value": total})
        # odd function of m on the diagonal
        for a, b in _cartesian(cfg.indices, repeat=2):
            for m in range(-M, M + 1):
                lhs = cocycle(cfg, LieElement.basis(a, m), LieElement.basis(b, -m))
                rhs = cocycle(cfg, LieElement.basis(a, -m), LieElement.basis(b, m))
                rep.record(lhs == -rhs, {"identity": "odd-in-m", "pair": (a, b), "m": m})
        rep.record(cocycle_polynomial_identity(), {"identity": "polynomial"})
        s = 1 - cfg.epsilon
        for m, n, k in _cartesian(range(-M, M + 1), repeat=3):
            val = ((m * m - n * n) * (k * k - s * s) + (n * n - k * k) * (m * m - s * s)
                   + (k * k - m * m) * (n * n - s * s))
            rep.record(val == 0, {"identity": "polynomial-sample", "mnk": (m, n, k)})
    return rep


def virasoro_check(cfg: LieAlgebraConfig, M: int = 5) -> Report:
    """1-dim e*e = e at eps = 0 against [L_m, L_n] = (m-n)L_{m+n} + delta (m^3-m)/12 C.

    The Virasoro central element C is identified with <e,e> c, so the
    match is symbol-for-symbol when <e,e> = 1.
    """
    A = cfg.algebra
    if not isinstance(A, AlgebraSpec) or A.dim != 1 or A.product[0][0][0] != 1:
        raise DomainError("the Virasoro check needs the 1-dimensional algebra e*e = e")
    rep = Report("lie", "virasoro", {"eps": cfg.epsilon, "M": M}, window={"M": M})
    scale = A.form[0][0]
    with timed(rep):
        for m, n in _cartesian(range(-M, M + 1), repeat=2):
            got = bracket(cfg, LieElement.basis(0, m), LieElement.basis(0, n))
            central = Fraction(m ** 3 - m, 12) * scale if m + n == 0 else 0
            want = LieElement({(0, m + n): m - n}, central)
            rep.compare((m, n), got, want)
    return rep


# tensor-product construction ---------------------------------------------

class TensorLie:
    """[a (x) f, b (x) g] = ab (x) (df) g - ba (x) (dg) f on A (x) K."""

    def __init__(self, A: AlgebraSpec, K: AlgebraSpec, D):
        nov = is_left_novikov(A)
        if not nov:
            raise DomainError("first factor must be a Novikov algebra", nov.witnesses[:1])
        ca = is_commutative_associative(K)
        if not ca:
            raise DomainError("second factor must be commutative and associative", ca.witnesses[:1])
        der = check_derivation(K, D)
        if not der:
            raise DomainError("matrix is not a derivation of the second factor", der.witnesses[:1])
        self.A, self.K = A, K
        self.D = tuple(tuple(Fraction(x) for x in row) for row in D)

    def _d(self, f):
        n = self.K.dim
        return tuple(sum((f[i] * self.D[i][k] for i in range(n)), Fraction(0)) for k in range(n))

    def basis_bracket(self, i, p, j, q) -> dict:
        A, K = self.A, self.K
        ef, eg = K.unit_vector(p), K.unit_vector(q)
        left = K.mul(self._d(ef), eg)
        right = K.mul(self._d(eg), ef)
        out: dict = {}
        for k, c in basis_product(A, i, j).items():
            for r, d in enumerate(left):
                if d:
                    out[(k, r)] = out.get((k, r), 0) + c * d
        for k, c in basis_product(A, j, i).items():
            for r, d in enumerate(right):
                if d:
                    out[(k, r)] = out.get((k, r), 0) - c * d
        return {key: c for key, c in out.items() if c}

    def bracket(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for (i, p), a in u.items():
            for (j, q), b in v.items():
                for key, c in self.basis_bracket(i, p, j, q).items():
                    out[key] = out.get(key, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def verify_jacobi(self) -> Report:
        rep = Report("lie", "tensor-lie", {"A": self.A.name, "K": self.K.name})
        gens = [((i, p),) for i in range(self.A.dim) for p in range(self.K.dim)]
        els = [{g[0]: Fraction(1)} for g in gens]
        for x, y in combinations_with_replacement(range(len(els)), 2):
            s = _dadd(self.bracket(els[x], els[y]), self.bracket(els[y], els[x]))
            rep.record(not s, {"identity": "antisymmetry", "pair": (gens[x], gens[y])})
        for x, y, z in combinations_with_replacement(range(len(els)), 3):
            u, v, w = els[x], els[y], els[z]
            J = _dadd(_dadd(self.bracket(self.bracket(u, v), w), self.bracket(self.bracket(v, w), u)),
                      self.bracket(self.bracket(w, u), v))
            rep.record(not J, {"identity": "jacobi", "triple": (gens[x], gens[y], gens[z])})
        return rep


def _dadd(u, v):
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def bracket_tensor(A: AlgebraSpec, K: AlgebraSpec, D, u: dict, v: dict) -> dict:
    """Bracket on A (x) K; elements are dicts {(a-index, K-index): coeff}."""
    return TensorLie(A, K, D).bracket(u, v)


# indexed families -----------------------------------------------------------

def _family_eps(family) -> int:
    if family == "poisson":
        return 0
    if family == "virasoro_like":
        return 1
    if isinstance(family, tuple) and family[0] == "block":
        return int(family[1])
    if isinstance(family, str) and family.startswith("block"):
        return int(family[len("block"):].strip("()"))
    raise StructuralError(f"unknown family {family!r}")


def indexed_family_bracket(family, im, jn) -> LieElement:
    """(j(m+1-eps) - i(n+1-eps)) L(i+j, m+n); poisson is eps=0, virasoro_like eps=1."""
    eps = _family_eps(family)
    (i, m), (j, n) = im, jn
    return LieElement({(i + j, m + n): j * (m + 1 - eps) - i * (n + 1 - eps)})


def family_config(family) -> LieAlgebraConfig:
    """The same family realized as L^eps of the Laurent algebra x^i o x^j = j x^(i+j)."""
    return LieAlgebraConfig(laurent_novikov(LaurentPoly.monomial(1)), _family_eps(family), with_center=False)


def verify_family(family, M: int = 3) -> Report:
    cfg = family_config(family)
    rep = Report("lie", "indexed-family", {"family": str(family), "M": M}, window={"M": M})
    idx = list(range(-M, M + 1))
    for i, m, j, n in _cartesian(idx, repeat=4):
        rep.compare(((i, m), (j, n)), indexed_family_bracket(family, (i, m), (j, n)),
                    bracket(cfg, LieElement.basis(i, m), LieElement.basis(j, n)))
    rep.merge(verify_lie(cfg, min(M, 2), indices=range(-2, 3)))
    return rep


# sl2 action ------------------------------------------------------------------

def sl2_apply(k: int, u: LieElement) -> LieElement:
    """L(k) for k in {-1, 0, 1} acting on L~(A) (eps = 0); the center is killed.

    L(-1) L(a,m) = -(m+1) L(a,m-1),  L(0) L(a,m) = -m L(a,m),
    L(1) L(a,m) = (1-m) L(a,m+1).
    """
    out = {}
    for (a, m), c in u._terms.items():
        if k == -1:
            out[(a, m - 1)] = out.get((a, m - 1), 0) - (m + 1) * c
        elif k == 0:
            out[(a, m)] = out.get((a, m), 0) - m * c
        elif k == 1:
            out[(a, m + 1)] = out.get((a, m + 1), 0) + (1 - m) * c
        else:
            raise StructuralError("sl2 index must be -1, 0 or 1")
    return LieElement(out)


def sl2_derivations(A: AlgebraSpec, M: int = 4, require_commutative: bool = True) -> Report:
    """Commutation relations and the derivation property of the sl2 action."""
    ca = is_commutative_associative(A)
    if require_commutative and not ca:
        raise DomainError("the sl2 action needs a commutative associative algebra", ca.witnesses[:1])
    cfg = LieAlgebraConfig(A, 0, with_center=A.form is not None)
    rep = Report("lie", "sl2-derivations", {"algebra": A.name, "M": M}, window={"M": M})
    with timed(rep):
        gens = _generators(cfg, M)
        for g in gens:
            u = LieElement.basis(*g)
            for i, j in ((1, -1), (0, -1), (0, 1)):
                lhs = sl2_apply(i, sl2_apply(j, u)) - sl2_apply(j, sl2_apply(i, u))
                rhs = sl2_apply(i + j, u) * (i - j)
                rep.record(lhs == rhs, {"identity": "sl2-relation", "pair": (i, j), "on": g})
        for g1, g2 in _cartesian(gens, repeat=2):
            u, v = LieElement.basis(*g1), LieElement.basis(*g2)
            for k in (-1, 0, 1):
                lhs = sl2_apply(k, bracket(cfg, u, v))
                rhs = bracket(cfg, sl2_apply(k, u), v) + bracket(cfg, u, sl2_apply(k, v))
                rep.record(lhs == rhs, {"identity": "derivation", "X": k, "pair": (g1, g2),
                                        "lhs": repr(lhs), "rhs": repr(rhs)})
    return rep


def theta_isomorphism_check(A: AlgebraSpec, eps: int, M: int = 4) -> Report:
    """L(a,m) -> L^eps(a,m) preserves centerless brackets for commutative A."""
    for i, j in _cartesian(range(A.dim), repeat=2):
        if A.product[i][j] != A.product[j][i]:
            raise DomainError("theta is a homomorphism only for commutative algebras",
                              (A.basis[i], A.basis[j]))
    src = LieAlgebraConfig(A, 0, with_center=False)
    dst = LieAlgebraConfig(A, eps, with_center=False)
    rep = Report("lie", "theta-isomorphism", {"eps": eps, "M": M}, window={"M": M})
    for g1, g2 in _cartesian(_generators(src, M), repeat=2):
        u, v = LieElement.basis(*g1), LieElement.basis(*g2)
        rep.compare((g1, g2), bracket(src, u, v), bracket(dst, u, v))
    return rep
