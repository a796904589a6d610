"""Finite-dimensional algebras given by structure constants.

An :class:`AlgebraSpec` stores e_i e_j = sum_k c[i][j][k] e_k and an optional
symmetric bilinear form.  Vectors are plain tuples of Fractions in the
basis.  The checkers return :class:`~phivertex.report.Report` objects whose
witnesses are the offending basis triples together with the residual.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Callable, Sequence

import sympy

from .errors import DomainError, StructuralError
from .report import Report, timed
from .series import LaurentPoly

Vector = tuple


def _frac_tensor(data, shape):
    def conv(x, depth):
        if depth == len(shape):
            return Fraction(x)
        if len(x) != shape[depth]:
            raise StructuralError(f"tensor axis {depth} has length {len(x)}, expected {shape[depth]}")
        return tuple(conv(y, depth + 1) for y in x)
    return conv(data, 0)


@dataclass(frozen=True)
class AlgebraSpec:
    dim: int
    basis: tuple
    product: tuple  # dim x dim x dim
    form: tuple | None = None  # dim x dim, symmetric
    name: str = ""

    def __post_init__(self):
        if self.dim <= 0:
            raise StructuralError("dimension must be positive")
        basis = tuple(self.basis) if self.basis else tuple(f"e{i + 1}" for i in range(self.dim))
        if len(basis) != self.dim or len(set(basis)) != self.dim:
            raise StructuralError(f"need {self.dim} distinct basis names, got {basis}")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "product", _frac_tensor(self.product, (self.dim,) * 3))
        if self.form is not None:
            g = _frac_tensor(self.form, (self.dim,) * 2)
            for i in range(self.dim):
                for j in range(i):
                    if g[i][j] != g[j][i]:
                        raise StructuralError(
                            f"form is not symmetric: <{basis[i]},{basis[j]}> = {g[i][j]} "
                            f"but <{basis[j]},{basis[i]}> = {g[j][i]}")
            object.__setattr__(self, "form", g)

    @classmethod
    def from_table(cls, basis, table: dict, form: dict | None = None, name=""):
        """Build from sparse dicts: ``{(i, j): {k: c}}`` and ``{(i, j): c}``."""
        n = len(basis)
        prod = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), out in table.items():
            for k, c in out.items():
                prod[i][j][k] = Fraction(c)
        g = None
        if form is not None:
            g = [[Fraction(0)] * n for _ in range(n)]
            for (i, j), c in form.items():
                g[i][j] = Fraction(c)
                g[j][i] = Fraction(c)
        return cls(n, tuple(basis), prod, g, name)

    def with_form(self, form) -> "AlgebraSpec":
        return AlgebraSpec(self.dim, self.basis, self.product, form, self.name)

    # vector helpers

    def unit_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def zero(self) -> Vector:
        return (Fraction(0),) * self.dim

    def mul(self, u: Sequence, v: Sequence) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                row = self.product[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] += ui * vj * row[k]
        return tuple(out)

    def basis_mul(self, i: int, j: int) -> Vector:
        return self.product[i][j]

    def pair(self, u: Sequence, v: Sequence) -> Fraction:
        if self.form is None:
            raise StructuralError("algebra has no bilinear form")
        return sum((u[i] * self.form[i][j] * v[j] for i in range(self.dim) for j in range(self.dim)),
                   Fraction(0))

    def name_of(self, v: Sequence) -> str:
        parts = [f"{c}*{b}" if c != 1 else b for c, b in zip(v, self.basis) if c]
        return " + ".join(parts) if parts else "0"


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _triples(A):
    return _cartesian(range(A.dim), repeat=3)


def is_left_novikov(A: AlgebraSpec) -> Report:
    """(ab)c - a(bc) = (ba)c - b(ac)  and  (ab)c = (ac)b  on basis triples."""
    rep = Report("novikov", "novikov-identities", {"algebra": A.name or A.basis})
    with timed(rep):
        for i, j, k in _triples(A):
            a, b, c = (A.unit_vector(t) for t in (i, j, k))
            ab, ba = A.mul(a, b), A.mul(b, a)
            lhs = _sub(A.mul(ab, c), A.mul(a, A.mul(b, c)))
            rhs = _sub(A.mul(ba, c), A.mul(b, A.mul(a, c)))
            triple = (A.basis[i], A.basis[j], A.basis[k])
            rep.record(lhs == rhs, {"identity": "left-symmetric", "triple": triple,
                                    "residual": _sub(lhs, rhs)})
            r2 = _sub(A.mul(ab, c), A.mul(A.mul(a, c), b))
            rep.record(not any(r2), {"identity": "right-commutative", "triple": triple, "residual": r2})
    return rep


def is_commutative_associative(A: AlgebraSpec) -> Report:
    rep = Report("novikov", "commutative-associative", {"algebra": A.name or A.basis})
    with timed(rep):
        for i, j in _cartesian(range(A.dim), repeat=2):
            r = _sub(A.basis_mul(i, j), A.basis_mul(j, i))
            rep.record(not any(r), {"identity": "commutative", "pair": (A.basis[i], A.basis[j]),
                                    "residual": r})
        for i, j, k in _triples(A):
            a, b, c = (A.unit_vector(t) for t in (i, j, k))
            r = _sub(A.mul(A.mul(a, b), c), A.mul(a, A.mul(b, c)))
            rep.record(not any(r), {"identity": "associative",
                                    "triple": (A.basis[i], A.basis[j], A.basis[k]), "residual": r})
    return rep


def check_form(A: AlgebraSpec) -> Report:
    """Symmetry plus <ab,c> = <a,bc> and <ab,c> = <ba,c>."""
    if A.form is None:
        raise StructuralError("algebra has no bilinear form to check")
    rep = Report("novikov", "invariant-form", {"algebra": A.name or A.basis})
    with timed(rep):
        for i, j in _cartesian(range(A.dim), repeat=2):
            rep.record(A.form[i][j] == A.form[j][i], {"identity": "symmetric", "pair": (i, j)})
        for i, j, k in _triples(A):
            a, b, c = (A.unit_vector(t) for t in (i, j, k))
            triple = (A.basis[i], A.basis[j], A.basis[k])
            lhs = A.pair(A.mul(a, b), c)
            rep.record(lhs == A.pair(a, A.mul(b, c)),
                       {"identity": "<ab,c>=<a,bc>", "triple": triple,
                        "lhs": lhs, "rhs": A.pair(a, A.mul(b, c))})
            rep.record(lhs == A.pair(A.mul(b, a), c),
                       {"identity": "<ab,c>=<ba,c>", "triple": triple,
                        "lhs": lhs, "rhs": A.pair(A.mul(b, a), c)})
    return rep


def _apply_matrix(D, v):
    """Row convention: d(e_i) = sum_k D[i][k] e_k."""
    n = len(v)
    return tuple(sum((v[i] * D[i][k] for i in range(n)), Fraction(0)) for k in range(n))


def check_derivation(A: AlgebraSpec, D) -> Report:
    D = _frac_tensor(D, (A.dim, A.dim))
    rep = Report("novikov", "derivation", {"algebra": A.name or A.basis})
    for i, j in _cartesian(range(A.dim), repeat=2):
        a, b = A.unit_vector(i), A.unit_vector(j)
        lhs = _apply_matrix(D, A.mul(a, b))
        rhs = tuple(x + y for x, y in zip(A.mul(_apply_matrix(D, a), b), A.mul(a, _apply_matrix(D, b))))
        rep.record(lhs == rhs, {"pair": (A.basis[i], A.basis[j]), "residual": _sub(lhs, rhs)})
    return rep


def gelfand(A: AlgebraSpec, D, name: str | None = None) -> AlgebraSpec:
    """The Novikov algebra a o b = a * D(b) on a commutative associative A."""
    ca = is_commutative_associative(A)
    if not ca:
        raise DomainError("base algebra must be commutative and associative", ca.witnesses[:1])
    der = check_derivation(A, D)
    if not der:
        raise DomainError("matrix is not a derivation of the algebra", der.witnesses[:1])
    D = _frac_tensor(D, (A.dim, A.dim))
    prod = [[list(A.mul(A.unit_vector(i), _apply_matrix(D, A.unit_vector(j)))) for j in range(A.dim)]
            for i in range(A.dim)]
    return AlgebraSpec(A.dim, A.basis, prod, None, name or f"gelfand({A.name})")


def invariant_forms(A: AlgebraSpec) -> list[tuple]:
    """Basis of the space of symmetric invariant forms, each as a dim x dim tuple.

    The conditions are linear in the entries g_ij (i <= j); the exact
    nullspace comes from sympy.
    """
    n = A.dim
    unknowns = [(i, j) for i in range(n) for j in range(i, n)]
    col = {u: c for c, u in enumerate(unknowns)}

    def pair_row(u, v):
        row = [Fraction(0)] * len(unknowns)
        for i in range(n):
            for j in range(n):
                if u[i] and v[j]:
                    row[col[(min(i, j), max(i, j))]] += u[i] * v[j]
        return row

    rows = []
    for i, j, k in _triples(A):
        a, b, c = (A.unit_vector(t) for t in (i, j, k))
        ab = A.mul(a, b)
        base = pair_row(ab, c)
        for other in (pair_row(a, A.mul(b, c)), pair_row(A.mul(b, a), c)):
            rows.append([x - y for x, y in zip(base, other)])
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    out = []
    for vec in M.nullspace():
        vals = [Fraction(int(x.p), int(x.q)) for x in vec]
        g = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(unknowns, vals):
            g[i][j] = g[j][i] = v
        out.append(tuple(tuple(r) for r in g))
    return out


@dataclass(frozen=True)
class IndexedAlgebra:
    """Infinite-dimensional algebra on basis {x^i : i in Z} given by a rule."""

    product_rule: Callable[[int, int], dict]
    description: str = ""

    def mul(self, u: dict, v: dict) -> dict:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.product_rule(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def check_novikov(self, window: int = 3) -> Report:
        rep = Report("novikov", "novikov-identities", {"algebra": self.description},
                     window={"index": window})
        idx = range(-window, window + 1)
        for i, j, k in _cartesian(idx, repeat=3):
            a, b, c = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
            lhs = _dsub(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)))
            rhs = _dsub(self.mul(self.mul(b, a), c), self.mul(b, self.mul(a, c)))
            rep.record(lhs == rhs, {"triple": (i, j, k), "identity": "left-symmetric"})
            rc = _dsub(self.mul(self.mul(a, b), c), self.mul(self.mul(a, c), b))
            rep.record(not rc, {"triple": (i, j, k), "identity": "right-commutative"})
        return rep


def _dsub(u, v):
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


def laurent_novikov(p: LaurentPoly) -> IndexedAlgebra:
    """x^i o x^j = j x^(i+j-1) p(x)."""
    terms = p.items()

    def rule(i, j):
        return {i + j - 1 + e: j * c for e, c in terms if j}

    return IndexedAlgebra(rule, f"x^i o x^j = j x^(i+j-1) ({p})")
