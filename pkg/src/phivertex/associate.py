"""Associates of the additive formal group.

phi_eps(x, z) = exp(z * x^eps d/dx) x is the flow of the vector field
x^eps d/dx.  Special cases::

    eps = 0:  x + z
    eps = 1:  x e^z
    eps = 2:  x / (1 - z x)

``phi`` is always built from the derivation exponential.  The closed form
and the coefficient product formula are independent cross-checks.

Closed forms in the literature are usually stated for phi_{d+1} in terms of
d.  Every function here takes the actual eps of phi_eps and writes
d = eps - 1 internally.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DomainError, StructuralError
from .report import Report, timed
from .series import (
    IteratedSeries,
    LaurentPoly,
    apply_derivation,
    binomial,
    series_invert,
    series_power,
    substitute,
)

X = LaurentPoly.monomial(1)


@dataclass(frozen=True)
class AssociateSeries:
    epsilon: int
    order: int
    series: IteratedSeries

    def __post_init__(self):
        s = self.series
        if s.constant_term() != X:
            raise StructuralError(f"phi(x, 0) must be x, got {s.constant_term()}")
        if self.order >= 1 and s.coefficient((1,)) != LaurentPoly.monomial(self.epsilon):
            raise StructuralError("the z-linear coefficient of an associate must be x^eps")

    def coefficient(self, k: int) -> LaurentPoly:
        return self.series.coefficient((k,))


def phi_series(eps: int, order: int, var: str = "z") -> IteratedSeries:
    """sum_{n <= order} z^n/n! (x^eps d/dx)^n x as a bare IteratedSeries."""
    if order < 0:
        raise StructuralError("order must be >= 0")
    coeffs = {}
    term = X
    for n in range(order + 1):
        coeffs[(n,)] = term * Fraction(1, factorial(n))
        term = apply_derivation(term, eps)
    return IteratedSeries(coeffs, (var,), order)


def phi(eps: int, order: int = 8) -> AssociateSeries:
    return AssociateSeries(eps, order, phi_series(eps, order))


def phi_closed(eps: int, order: int = 8) -> AssociateSeries:
    """Binomial expansion of x (1 - d z x^d)^(-1/d) with d = eps - 1."""
    d = eps - 1
    if d == 0:
        raise DomainError("eps = 1 has no algebraic closed form; phi_1 = x e^z")
    expo = Fraction(-1, d)
    coeffs = {(k,): LaurentPoly.monomial(k * d + 1, binomial(expo, k) * Fraction(-d) ** k)
              for k in range(order + 1)}
    return AssociateSeries(eps, order, IteratedSeries(coeffs, ("z",), order))


def phi_coefficient_formula(eps: int, k: int) -> LaurentPoly:
    """z^k coefficient of phi_eps: x^(k d + 1) prod_{j<k} (1 + j d) / k!,  d = eps - 1."""
    if k < 0:
        raise StructuralError("k must be >= 0")
    d = eps - 1
    c = Fraction(1)
    for j in range(k):
        c *= 1 + j * d
    return LaurentPoly.monomial(k * d + 1, c / factorial(k))


def check_associate_axioms(eps: int, order: int = 8) -> Report:
    """phi(x, 0) = x and phi(phi(x, x0), x2) = phi(x, x0 + x2) to total order N."""
    rep = Report("associate", "associate-axioms", {"eps": eps, "N": order},
                 window={"N": order})
    with timed(rep):
        p = phi_series(eps, order)
        rep.compare("phi(x,0)", substitute(p, "z", 0).constant_term(), X)
        inner = phi_series(eps, order, "x0")
        outer = phi_series(eps, order, "x2")
        lhs = substitute(outer, "x", inner).with_variables(("x0", "x2"))
        shift = IteratedSeries.variable("x0", ("x0", "x2"), order) + IteratedSeries.variable("x2", ("x0", "x2"), order)
        rhs = substitute(p, "z", shift).with_variables(("x0", "x2"))
        _compare_series(rep, lhs, rhs)
    return rep


def check_closed_form(eps: int, order: int = 8) -> Report:
    """Exponential flow, closed form and the product formula agree to order N (eps != 1)."""
    rep = Report("associate", "closed-form", {"eps": eps, "N": order}, window={"N": order})
    with timed(rep):
        flow = phi(eps, order)
        if eps != 1:
            _compare_series(rep, flow.series, phi_closed(eps, order).series, "closed ")
        for k in range(order + 1):
            rep.compare({"k": k}, flow.coefficient(k), phi_coefficient_formula(eps, k))
    return rep


def _compare_series(rep: Report, lhs: IteratedSeries, rhs: IteratedSeries, label=""):
    keys = set(lhs.coeffs) | set(rhs.coeffs)
    for key in sorted(keys):
        rep.compare(f"{label}{dict(zip(lhs.variables, key))}", lhs.coefficient(key), rhs.coefficient(key))
    if not keys:
        rep.record(True)


def h_series(eps: int, order: int = 8) -> IteratedSeries:
    """h with phi_eps(x, z) - x = z h(x, z); its z-constant term is x^eps."""
    return (phi_series(eps, order + 1) - X).divide_by_variable("z")


def g_series(eps: int, order: int = 8) -> IteratedSeries:
    """g with phi(x, x1) - phi(x, x2) = (x1 - x2) g(x, x1, x2).

    g = sum_{j >= 1} (1/j!) (x1 - x2)^(j-1) (x^eps d/dx)^j phi(x, x2).
    """
    vs = ("x1", "x2")
    diff = IteratedSeries.variable("x1", vs, order + 1) - IteratedSeries.variable("x2", vs, order + 1)
    base = phi_series(eps, order + 1, "x2").with_variables(vs)
    total = IteratedSeries({}, vs, order + 1)
    der = base
    diff_pow = diff._coerce(1)
    for j in range(1, order + 2):
        der = der.base_derivation(eps)
        total = total + diff_pow * der * Fraction(1, factorial(j))
        diff_pow = diff_pow * diff
    return total.truncate(order)


def f_inverse(eps: int, order: int = 8) -> IteratedSeries:
    """f_eps(x, z) with phi_eps(x, f_eps(x, z)) = x (1 + z).

    f_eps = x^(1-eps) ((1+z)^(1-eps) - 1)/(1-eps), and log(1+z) at eps = 1.
    """
    coeffs = {}
    for n in range(1, order + 1):
        if eps == 1:
            coeffs[(n,)] = LaurentPoly.constant(Fraction((-1) ** (n + 1), n))
        else:
            coeffs[(n,)] = LaurentPoly.monomial(1 - eps, binomial(1 - eps, n) / (1 - eps))
    return IteratedSeries(coeffs, ("z",), order)


def check_unit_lemmas(eps: int, order: int = 8) -> Report:
    """Factorizations and unit properties of h, g and the inverse f."""
    rep = Report("associate", "units-h-g-f", {"eps": eps, "N": order}, window={"N": order})
    with timed(rep):
        p = phi_series(eps, order)
        z = IteratedSeries.variable("z", ("z",), order)
        h = h_series(eps, order)
        _compare_series(rep, p - X, (z * h), "phi-x=zh ")
        rep.compare("h const", h.constant_term(), LaurentPoly.monomial(eps))
        _compare_series(rep, h * series_invert(h), h._coerce(1), "h*h^-1 ")

        g = g_series(eps, order)
        vs = ("x1", "x2")
        lhs = (phi_series(eps, order, "x1").with_variables(vs)
               - phi_series(eps, order, "x2").with_variables(vs))
        diff = IteratedSeries.variable("x1", vs, order) - IteratedSeries.variable("x2", vs, order)
        _compare_series(rep, lhs, diff * g, "(x1-x2)g ")
        rep.compare("g const", g.constant_term(), LaurentPoly.monomial(eps))
        _compare_series(rep, g * series_invert(g), g._coerce(1), "g*g^-1 ")
        # On the diagonal g restricts to d phi/d x2 = phi^eps.
        diag = substitute(g, "x1", IteratedSeries.variable("x2", ("x2",), order))
        phi2 = phi_series(eps, order, "x2")
        _compare_series(rep, diag, series_power(phi2, eps), "g(x,x2,x2) ")

        f = f_inverse(eps, order)
        comp = substitute(p, "z", f)
        _compare_series(rep, comp, X * (1 + z), "phi(x,f) ")
    return rep


def g_diagonal_as_stated(eps: int, order: int = 8) -> bool:
    """Whether g(x, x2, x2) equals phi_eps(x, x2) itself (true only for eps = 1)."""
    g = g_series(eps, order)
    diag = substitute(g, "x1", IteratedSeries.variable("x2", ("x2",), order))
    return diag == phi_series(eps, order, "x2")
