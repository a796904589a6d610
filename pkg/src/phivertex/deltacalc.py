"""Formal delta distributions and their twisted derivatives.

The basic object is

    K_s = x1^s delta(x2/x1) = sum_{n in Z} x2^n x1^(s-n),

with the default kernel exponent s = eps - 1.  A :class:`DeltaExpression`
is a finite sum  sum_j c_j(x2) D^j K_s,  where D is either the twisted
derivative x2^eps d/dx2 (basis ``"twisted"``) or plain d/dx2 (basis
``"plain"``).  Since D^j x2^n is a single monomial, every coefficient of the
expanded distribution has a closed form, so windowed expansions are exact:
enlarging a window never changes coefficients already inside it.

Binomials (x1 - x2)^n with n < 0 are expanded in nonnegative powers of the
second variable throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from math import comb, factorial
from typing import Callable

from .errors import StructuralError, TruncationMismatch, WindowOverflow
from .report import Report, timed
from .series import IteratedSeries, LaurentPoly, binomial, series_power

Window = tuple  # tuple of (lo, hi) pairs, one per variable


def _window(window, nvars=2) -> tuple:
    if isinstance(window, int):
        return ((-window, window),) * nvars
    window = tuple((int(lo), int(hi)) for lo, hi in window)
    if len(window) != nvars:
        raise StructuralError(f"expected a window with {nvars} ranges, got {window}")
    for lo, hi in window:
        if lo > hi:
            raise StructuralError(f"empty window range [{lo}, {hi}]")
    return window


class BilateralSeries:
    """Restriction of a multivariate bilateral formal distribution to a box."""

    __slots__ = ("variables", "window", "_coeffs")

    def __init__(self, coeffs, window, variables=("x1", "x2")):
        variables = tuple(variables)
        self.variables = variables
        self.window = _window(window, len(variables))
        clean = {}
        for key, c in coeffs.items():
            key = tuple(key)
            if not self.contains(key):
                raise WindowOverflow(f"exponent {key} outside window {self.window}", self.window)
            c = Fraction(c)
            if c:
                clean[key] = c
        self._coeffs = clean

    @classmethod
    def from_function(cls, fn: Callable, window, variables=("x1", "x2")):
        window = _window(window, len(variables))
        ranges = [range(lo, hi + 1) for lo, hi in window]
        return cls({key: fn(*key) for key in _cartesian(*ranges)}, window, variables)

    def contains(self, key) -> bool:
        return all(lo <= k <= hi for k, (lo, hi) in zip(key, self.window))

    @property
    def coeffs(self):
        return dict(self._coeffs)

    def coefficient(self, *key) -> Fraction:
        if len(key) == 1 and isinstance(key[0], tuple):
            key = key[0]
        if not self.contains(key):
            raise WindowOverflow(f"exponent {key} outside window {self.window}", self.window)
        return self._coeffs.get(tuple(key), Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def _same_box(self, other):
        if self.variables != other.variables or self.window != other.window:
            raise TruncationMismatch("bilateral series live on different windows")

    def __add__(self, other):
        self._same_box(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return BilateralSeries(out, self.window, self.variables)

    def __neg__(self):
        return BilateralSeries({k: -c for k, c in self._coeffs.items()}, self.window, self.variables)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return BilateralSeries({k: v * c for k, v in self._coeffs.items()}, self.window, self.variables)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BilateralSeries):
            return NotImplemented
        self._same_box(other)
        return self._coeffs == other._coeffs

    __hash__ = None

    def restrict(self, window) -> "BilateralSeries":
        window = _window(window, len(self.variables))
        for (lo, hi), (LO, HI) in zip(window, self.window):
            if lo < LO or hi > HI:
                raise WindowOverflow(f"window {window} not inside {self.window}", self.window)
        sub = BilateralSeries({}, window, self.variables)
        sub._coeffs = {k: c for k, c in self._coeffs.items() if sub.contains(k)}
        return sub

    def mul_monomial(self, exps) -> "BilateralSeries":
        """Multiply by prod x_i^exps[i]; the window moves with the exponents."""
        window = tuple((lo + e, hi + e) for (lo, hi), e in zip(self.window, exps))
        return BilateralSeries({tuple(k + e for k, e in zip(key, exps)): c
                                for key, c in self._coeffs.items()}, window, self.variables)

    def transpose(self) -> "BilateralSeries":
        """Swap the first two variables (x1 <-> x2)."""
        perm = lambda t: (t[1], t[0]) + tuple(t[2:])
        return BilateralSeries({perm(k): c for k, c in self._coeffs.items()},
                               perm(self.window), perm(self.variables))

    def items(self):
        return sorted(self._coeffs.items())

    def __repr__(self):
        return f"BilateralSeries({len(self._coeffs)} terms on {self.window})"


def falling_twisted(n: int, j: int, eps: int) -> Fraction:
    """Scalar with (x^eps d/dx)^j x^n = falling_twisted(n, j, eps) * x^(n + j(eps-1))."""
    out = 1
    for r in range(j):
        out *= n + r * (eps - 1)
    return Fraction(out)


def falling(n: int, j: int) -> Fraction:
    out = 1
    for r in range(j):
        out *= n - r
    return Fraction(out)


@dataclass(frozen=True)
class DeltaExpression:
    """sum_j c_j(x2) D^j x1^s delta(x2/x1) with s = ``kernel`` (default eps-1)."""

    epsilon: int
    terms: tuple = ((0, LaurentPoly.constant(1, "x2")),)
    kernel: int | None = None
    basis: str = "twisted"

    def __post_init__(self):
        if self.basis not in ("twisted", "plain"):
            raise StructuralError(f"unknown basis {self.basis!r}")
        merged: dict[int, LaurentPoly] = {}
        for j, c in self.terms:
            if j < 0:
                raise StructuralError("derivative order must be >= 0")
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.constant(Fraction(c), "x2")
            if c.var != "x2":
                raise StructuralError("coefficients must be Laurent polynomials in x2")
            merged[j] = merged[j] + c if j in merged else c
        object.__setattr__(self, "terms", tuple(sorted((j, c) for j, c in merged.items() if c)))
        if self.kernel is None:
            object.__setattr__(self, "kernel", self.epsilon - 1)

    @classmethod
    def derivative(cls, eps: int, j: int, coeff=1, kernel=None, basis="twisted"):
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.constant(Fraction(coeff), "x2")
        return cls(eps, ((j, c),), kernel, basis)

    def _step(self, n: int, j: int):
        """(scalar, x2-shift) with D^j x2^n = scalar * x2^(n + shift)."""
        if self.basis == "twisted":
            return falling_twisted(n, j, self.epsilon), j * (self.epsilon - 1)
        return falling(n, j), -j

    def coefficient(self, i: int, k: int) -> Fraction:
        """Exact coefficient of x1^i x2^k."""
        n = self.kernel - i
        total = Fraction(0)
        for j, c in self.terms:
            scalar, shift = self._step(n, j)
            if scalar:
                total += c.coefficient(k - n - shift) * scalar
        return total

    def __add__(self, other: "DeltaExpression"):
        if (self.epsilon, self.kernel, self.basis) != (other.epsilon, other.kernel, other.basis):
            raise StructuralError("delta expressions differ in eps, kernel or basis")
        return DeltaExpression(self.epsilon, self.terms + other.terms, self.kernel, self.basis)


def expand_delta(d: DeltaExpression, window) -> BilateralSeries:
    return BilateralSeries.from_function(d.coefficient, window)


def twist_derivative(d: DeltaExpression) -> DeltaExpression:
    """Apply x2^eps d/dx2 once, by Leibniz, staying in the same basis."""
    eps = d.epsilon
    new = []
    for j, c in d.terms:
        new.append((j, c.derivative().shift(eps)))
        new.append((j + 1, c if d.basis == "twisted" else c.shift(eps)))
    return DeltaExpression(eps, tuple(new), d.kernel, d.basis)


def _operator_in_other_basis(j: int, eps: int, to: str) -> dict:
    """Express one basis operator through the other: {order: coefficient in x2}.

    twisted -> plain: (x^eps d)^j = sum_k f_k d^k.
    plain -> twisted: d^j = sum_k g_k (x^eps d)^k, using d = x^-eps (x^eps d).
    """
    ops = {0: LaurentPoly.constant(1, "x2")}
    lead = eps if to == "plain" else -eps
    for _ in range(j):
        nxt: dict[int, LaurentPoly] = {}
        for k, f in ops.items():
            # multiply on the left by x^lead d (to plain) or by d (to twisted)
            if to == "plain":
                parts = [(k, f.derivative().shift(eps)), (k + 1, f.shift(eps))]
            else:
                parts = [(k, f.derivative()), (k + 1, f.shift(-eps))]
            for kk, g in parts:
                if g:
                    nxt[kk] = nxt[kk] + g if kk in nxt else g
        ops = nxt
    return ops


def convert_basis(d: DeltaExpression, to: str) -> DeltaExpression:
    if to == d.basis:
        return d
    terms = []
    for j, c in d.terms:
        for k, f in _operator_in_other_basis(j, d.epsilon, to).items():
            terms.append((k, c * f))
    return DeltaExpression(d.epsilon, tuple(terms), d.kernel, to)


def to_plain(d):
    return convert_basis(d, "plain")


def to_twisted(d):
    return convert_basis(d, "twisted")


def mul_difference_power(d: DeltaExpression, m: int, window) -> BilateralSeries:
    """(x1 - x2)^m * d on the window, m >= 0.  Exact on every window."""
    if m < 0:
        raise StructuralError("m must be >= 0")
    terms = [(r, m - r, comb(m, r) * (-1) ** (m - r)) for r in range(m + 1)]

    def coeff(i, k):
        return sum((c * d.coefficient(i - r, k - s) for r, s, c in terms), Fraction(0))

    return BilateralSeries.from_function(coeff, window)


def residue_x1(b: BilateralSeries) -> LaurentPoly:
    """The x1^-1 slice as a Laurent polynomial in x2 (valid on the x2 range)."""
    (lo, hi) = b.window[0]
    if not lo <= -1 <= hi:
        raise WindowOverflow(f"x1-exponent -1 is outside the window {b.window}", b.window)
    return LaurentPoly({k[1]: c for k, c in b.coeffs.items() if k[0] == -1}, "x2")


def residue_expression(eps: int, n: int, window, scaled: bool = False) -> LaurentPoly:
    """Res_x1 x1^-eps (x1-x2)^n D^n x1^(eps-1) delta(x2/x1), D = x2^eps d/dx2.

    With ``scaled`` the derivative carries its 1/n! (the normalization used in
    the commutator formula); then the residue is exactly x2^(n eps).
    Unscaled it is n! x2^(n eps).
    """
    d = DeltaExpression.derivative(eps, n, Fraction(1, factorial(n)) if scaled else 1)
    window = _window(window)
    shifted = ((window[0][0] + eps, window[0][1] + eps), window[1])
    prod = mul_difference_power(d, n, shifted).mul_monomial((-eps, 0))
    return residue_x1(prod)


def check_vanishing(eps: int, max_mn: int = 5, window=8) -> Report:
    """(x1-x2)^m D^n x1^-1 delta(x2/x1) = 0 for m > n and the m = n reduction."""
    rep = Report("delta", "difference-power-vanishing",
                 {"eps": eps, "max_mn": max_mn}, window={"box": _window(window)})
    with timed(rep):
        for n in range(max_mn + 1):
            d = DeltaExpression.derivative(eps, n, kernel=-1)
            for m in range(n + 1, max_mn + 1):
                prod = mul_difference_power(d, m, window)
                rep.record(prod.is_zero(), {"m": m, "n": n, "nonzero": prod.items()[:3]})
            # m = n: x2^(n eps) (x1-x2)^n d^n x1^-1 delta
            lhs = mul_difference_power(d, n, window)
            plain = DeltaExpression(eps, ((n, LaurentPoly.monomial(n * eps, 1, "x2")),), -1, "plain")
            rhs = mul_difference_power(plain, n, window)
            rep.record(lhs == rhs, {"m": n, "n": n})
    return rep


def check_residue_formula(eps: int, max_n: int = 5, window=8, as_stated: bool = True) -> Report:
    """Residue of x1^-eps (x1-x2)^n D^n x1^(eps-1) delta against a closed value.

    ``as_stated=True`` compares with x2^(n eps)/n!.  The exact value is
    n! x2^(n eps), so that comparison only holds for n <= 1.
    ``as_stated=False`` compares with n! x2^(n eps) and also checks the
    1/n!-normalized derivative gives x2^(n eps).
    """
    anchor = "residue-formula-as-stated" if as_stated else "residue-formula"
    rep = Report("delta", anchor, {"eps": eps, "max_n": max_n}, window={"box": _window(window)})
    with timed(rep):
        base = _window(window)
        for n in range(max_n + 1):
            # centre the x2 range on the target exponent n*eps so the check is not vacuous
            w = (base[0], (base[1][0] + n * eps, base[1][1] + n * eps))
            res = residue_expression(eps, n, w)
            if as_stated:
                expected = LaurentPoly.monomial(n * eps, Fraction(1, factorial(n)), "x2")
                rep.compare({"n": n}, res, expected)
            else:
                rep.compare({"n": n}, res, LaurentPoly.monomial(n * eps, factorial(n), "x2"))
                rep.compare({"n": n, "scaled": True}, residue_expression(eps, n, w, scaled=True),
                            LaurentPoly.monomial(n * eps, 1, "x2"))
    return rep


def check_delta_symmetry(eps: int, window=8) -> Report:
    """(x2^eps d/dx2) x1^(eps-1) delta(x2/x1) = -(x1^eps d/dx1) x2^(eps-1) delta(x1/x2)."""
    window = _window(window)
    rep = Report("delta", "delta-symmetry", {"eps": eps}, window={"box": window})
    with timed(rep):
        d = DeltaExpression.derivative(eps, 1)
        lhs = expand_delta(d, window)
        swapped = (window[1], window[0])
        rhs = -expand_delta(d, swapped).transpose()
        for key in _cartesian(*(range(lo, hi + 1) for lo, hi in window)):
            rep.compare(key, lhs.coefficient(key), rhs.coefficient(key))
    return rep


def check_twist_commutes(d: DeltaExpression, window) -> Report:
    """expand(twist(d)) equals x2^eps d/dx2 applied termwise to expand(d)."""
    window = _window(window)
    rep = Report("delta", "twist-expansion", {"eps": d.epsilon}, window={"box": window})
    eps = d.epsilon
    (lo1, hi1), (lo2, hi2) = window
    wide = expand_delta(d, ((lo1, hi1), (lo2 - eps + 1, hi2 - eps + 1)))
    twisted = expand_delta(twist_derivative(d), window)
    for i in range(lo1, hi1 + 1):
        for k in range(lo2, hi2 + 1):
            pre = k - eps + 1
            rep.compare((i, k), twisted.coefficient(i, k), wide.coefficient(i, pre) * pre)
    return rep


# three-term identity ----------------------------------------------------

def _binom_term(n: int, k: int) -> Fraction:
    """C(n, k) for integer n (any sign) and k >= 0; zero for k < 0."""
    if k < 0:
        return Fraction(0)
    return binomial(n, k)


def classical_three_term(window=4) -> dict[str, BilateralSeries]:
    """The three delta terms on a box in (x0, x1, x2)."""
    w = _window(window, 3)
    vs = ("x0", "x1", "x2")

    def a(x0, x1, x2):  # x0^-1 delta((x1-x2)/x0)
        n = -x0 - 1
        return _binom_term(n, x2) * (-1) ** x2 if x1 + x2 == n else Fraction(0)

    def b(x0, x1, x2):  # x0^-1 delta((x2-x1)/(-x0))
        n = -x0 - 1
        return (-1) ** (n % 2) * _binom_term(n, x1) * (-1) ** x1 if x1 + x2 == n else Fraction(0)

    def c(x0, x1, x2):  # x2^-1 delta((x1-x0)/x2)
        n = -x2 - 1
        return _binom_term(n, x0) * (-1) ** x0 if x0 + x1 == n else Fraction(0)

    return {name: BilateralSeries.from_function(fn, w, vs) for name, fn in (("a", a), ("b", b), ("c", c))}


def substituted_three_term(window=4) -> dict[str, BilateralSeries]:
    """The terms after x0 = x2 z, on a box in (x1, x2, z)."""
    w = _window(window, 3)
    vs = ("x1", "x2", "z")

    def a(x1, x2, z):  # (x2 z)^-1 delta((x1-x2)/(x2 z))
        n = -z - 1
        return _binom_term(n, n - x1) * (-1) ** ((n - x1) % 2) if x2 == -x1 - 1 else Fraction(0)

    def b(x1, x2, z):  # (x2 z)^-1 delta((x2-x1)/(-x2 z))
        n = -z - 1
        return (-1) ** (n % 2) * _binom_term(n, x1) * (-1) ** (x1 % 2) if x2 == -x1 - 1 else Fraction(0)

    def c(x1, x2, z):  # x1^-1 delta(x2 (1+z)/x1)
        n = -x1 - 1
        return _binom_term(n, z) if x2 == n else Fraction(0)

    return {name: BilateralSeries.from_function(fn, w, vs) for name, fn in (("a", a), ("b", b), ("c", c))}


def three_term_delta_check(window=4) -> Report:
    w = _window(window, 3)
    rep = Report("delta", "three-term-delta", {}, window={"box": w})
    with timed(rep):
        for label, terms in (("classical", classical_three_term(w)),
                             ("substituted", substituted_three_term(w))):
            diff = terms["a"] - terms["b"]
            for key in _cartesian(*(range(lo, hi + 1) for lo, hi in w)):
                rep.compare((label,) + key, diff.coefficient(key), terms["c"].coefficient(key))
        # sanity: the coefficient rule for (x1 - x2)^n matches series inversion
        for n in range(-4, 5):
            ser = series_power(IteratedSeries.from_laurent(LaurentPoly.monomial(1), ("x2",), 6)
                               - IteratedSeries.variable("x2", ("x2",), 6), n)
            for k in range(7):
                rep.compare(("binomial", n, k), ser.coefficient((k,)),
                            LaurentPoly.monomial(n - k, _binom_term(n, k) * (-1) ** k))
    return rep
