"""Sample algebras used by the tests, the CLI and the bundled spec files."""
from __future__ import annotations

from fractions import Fraction

from .novikov import AlgebraSpec, gelfand, invariant_forms

F = Fraction


def frobenius1d(level_form=F(1, 12)) -> AlgebraSpec:
    """One-dimensional e*e = e with <e,e> = 1/12 (the Virasoro case)."""
    return AlgebraSpec.from_table(("e",), {(0, 0): {0: 1}}, {(0, 0): level_form}, name="frobenius1d")


def noncomm2d() -> AlgebraSpec:
    """e1 e1 = e1 + e2, e2 e1 = e2, other products 0, with the degenerate form <e1,e1> = 1/12.

    Novikov but neither commutative nor associative.
    """
    return AlgebraSpec.from_table(
        ("e1", "e2"),
        {(0, 0): {0: 1, 1: 1}, (1, 0): {1: 1}},
        {(0, 0): F(1, 12)},
        name="noncomm2d",
    )


def dual2d() -> AlgebraSpec:
    """Dual numbers Q[e2]/(e2^2) with unit e1; form <u,v> = lambda(uv), lambda(e1)=1/12, lambda(e2)=1."""
    return AlgebraSpec.from_table(
        ("e1", "e2"),
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
        {(0, 0): F(1, 12), (0, 1): 1, (1, 1): 0},
        name="dual2d",
    )


def broken2d() -> AlgebraSpec:
    """e1 e1 = e2, e2 e1 = e1: fails left symmetry at (e1, e2, e1)."""
    return AlgebraSpec.from_table(("e1", "e2"), {(0, 0): {1: 1}, (1, 0): {0: 1}}, name="broken2d")


def truncated_polynomial(n: int = 3) -> AlgebraSpec:
    """Q[x]/(x^n) on the basis 1, x, ..., x^(n-1)."""
    table = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                table[(i, j)] = {i + j: 1}
    names = tuple("1" if i == 0 else ("x" if i == 1 else f"x{i}") for i in range(n))
    return AlgebraSpec.from_table(names, table, name=f"Q[x]/(x^{n})")


def euler_derivation(n: int = 3):
    """x d/dx on Q[x]/(x^n): x^i -> i x^i."""
    return [[F(i) if i == k else F(0) for k in range(n)] for i in range(n)]


def x2_derivation(n: int = 3):
    """x^2 d/dx on Q[x]/(x^n): x^i -> i x^(i+1)."""
    return [[F(i) if k == i + 1 else F(0) for k in range(n)] for i in range(n)]


def plain_derivative(n: int = 3):
    """d/dx on Q[x]/(x^n).  Not a derivation of the quotient (x^n is not killed)."""
    return [[F(i) if k == i - 1 else F(0) for k in range(n)] for i in range(n)]


def _with_some_form(A: AlgebraSpec) -> AlgebraSpec:
    forms = invariant_forms(A)
    nonzero = [g for g in forms if any(any(r) for r in g)]
    return A.with_form(nonzero[0] if nonzero else tuple(tuple(F(0) for _ in r) for r in A.product))


def gelfand_euler() -> AlgebraSpec:
    A = gelfand(truncated_polynomial(3), euler_derivation(3), name="gelfand-euler")
    return _with_some_form(A)


def gelfand_x2() -> AlgebraSpec:
    A = gelfand(truncated_polynomial(3), x2_derivation(3), name="gelfand-x2")
    return _with_some_form(A)


CATALOG = {
    "frobenius1d": frobenius1d,
    "noncomm2d": noncomm2d,
    "dual2d": dual2d,
    "gelfand-euler": gelfand_euler,
    "gelfand-x2": gelfand_x2,
}
