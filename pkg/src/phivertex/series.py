"""Exact Laurent polynomials and truncated iterated series.

Two containers live here:

* :class:`LaurentPoly` is a finite Laurent polynomial in one variable with
  :class:`fractions.Fraction` coefficients, stored sparsely.
* :class:`IteratedSeries` is an element of Q((x))[[z_1, ..., z_k]] known modulo
  the ideal (z_1, ..., z_k)^(N+1).  Coefficients of the z-monomials are
  LaurentPolys in the base variable.

Everything is exact.  Operations that would need infinitely many Laurent
terms (inverting a non-monomial Laurent polynomial) raise
:class:`~phivertex.errors.WindowOverflow` instead of truncating silently.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from math import factorial
from typing import Iterable, Mapping

from .errors import NotAUnit, StructuralError, SubstitutionError, TruncationMismatch, WindowOverflow

DEFAULT_ORDER = 8
DEFAULT_WINDOW = (-24, 24)


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def binomial(e, n: int) -> Fraction:
    """Generalized binomial coefficient C(e, n) for rational e and n >= 0."""
    out = Fraction(1)
    for i in range(n):
        out = out * (e - i) / (i + 1)
    return out


class LaurentPoly:
    """Finite Laurent polynomial in a single variable.

    >>> x = LaurentPoly.monomial(1)
    >>> (x + x**-1) * (x - x**-1)
    x^2 - x^-2
    """

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, object] | None = None, var: str = "x"):
        clean = {}
        for e, c in (terms or {}).items():
            c = as_fraction(c)
            if c:
                clean[int(e)] = c
        self._terms = clean
        self.var = var

    @classmethod
    def monomial(cls, exp: int, coeff=1, var: str = "x") -> "LaurentPoly":
        return cls({exp: coeff}, var)

    @classmethod
    def constant(cls, c, var: str = "x") -> "LaurentPoly":
        return cls({0: c}, var)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, e: int) -> Fraction:
        return self._terms.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def min_exp(self):
        return min(self._terms) if self._terms else None

    @property
    def max_exp(self):
        return max(self._terms) if self._terms else None

    def _check(self, other: "LaurentPoly"):
        if self.var != other.var:
            raise StructuralError(f"variable mismatch: {self.var} vs {other.var}")

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(as_fraction(other), self.var)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return laurent_mul(self, other)
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def scale(self, c) -> "LaurentPoly":
        c = as_fraction(c)
        return LaurentPoly({e: c * v for e, v in self._terms.items()}, self.var)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var**k."""
        return LaurentPoly({e + k: v for e, v in self._terms.items()}, self.var)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise WindowOverflow("negative power of a non-monomial Laurent polynomial")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c ** n}, self.var)
        out = LaurentPoly.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: e * c for e, c in self._terms.items() if e}, self.var)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.var == other.var and self._terms == other._terms
        try:
            return self._terms == LaurentPoly.constant(as_fraction(other))._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.var, frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = self.var
            else:
                mono = f"{self.var}^{e}"
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    p._check(q)
    out: dict[int, Fraction] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return LaurentPoly(out, p.var)


def apply_derivation(p: LaurentPoly, eps: int) -> LaurentPoly:
    """Return x^eps * dp/dx."""
    return p.derivative().shift(eps)


class IteratedSeries:
    """Truncated element of Q((x))[[z_1, ..., z_k]].

    ``coeffs`` maps exponent tuples (aligned with ``variables``) to
    LaurentPolys in ``base``.  Only monomials of total degree <= ``order``
    are meaningful; anything above is discarded on construction.
    """

    __slots__ = ("base", "variables", "order", "_coeffs")

    def __init__(self, coeffs: Mapping[tuple, LaurentPoly] | None = None,
                 variables: Iterable[str] = ("z",), order: int = DEFAULT_ORDER, base: str = "x"):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise StructuralError(f"repeated formal variable in {variables}")
        if base in variables:
            raise StructuralError("base variable cannot also be formal")
        if order < 0:
            raise StructuralError("truncation order must be >= 0")
        self.base = base
        self.variables = variables
        self.order = order
        clean = {}
        for key, poly in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != len(variables):
                raise StructuralError(f"exponent tuple {key} does not match {variables}")
            if any(k < 0 for k in key):
                raise StructuralError(f"negative formal exponent in {key}")
            if sum(key) > order:
                continue
            if not isinstance(poly, LaurentPoly):
                poly = LaurentPoly.constant(as_fraction(poly), base)
            elif poly.var != base:
                raise StructuralError(f"coefficient in {poly.var}, base is {base}")
            if poly:
                clean[key] = poly
        self._coeffs = clean

    # construction helpers

    @classmethod
    def from_laurent(cls, p, variables=("z",), order=DEFAULT_ORDER, base="x"):
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly.constant(as_fraction(p), base)
        return cls({(0,) * len(tuple(variables)): p}, variables, order, base)

    @classmethod
    def variable(cls, name, variables=None, order=DEFAULT_ORDER, base="x"):
        """The formal variable ``name`` itself as a series."""
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        key = tuple(1 if v == name else 0 for v in variables)
        return cls({key: LaurentPoly.constant(1, base)}, variables, order, base)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, Mapping[int, object]], variables=("z",),
                   order=DEFAULT_ORDER, base="x"):
        """Build from nested dicts ``{z-exponents: {x-exponent: coeff}}``."""
        return cls({k: LaurentPoly(v, base) for k, v in terms.items()}, variables, order, base)

    # inspection

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return sorted(self._coeffs.items())

    def coefficient(self, exps) -> LaurentPoly:
        """Coefficient of a z-monomial; ``exps`` is a tuple or a {var: exp} dict."""
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(self.variables)
            if any(exps[v] for v in unknown):
                return LaurentPoly({}, self.base)
            exps = tuple(exps.get(v, 0) for v in self.variables)
        exps = tuple(exps)
        if sum(exps) > self.order:
            raise TruncationMismatch(f"monomial {exps} is above truncation order {self.order}")
        return self._coeffs.get(exps, LaurentPoly({}, self.base))

    def constant_term(self) -> LaurentPoly:
        return self.coefficient((0,) * len(self.variables))

    def is_zero(self) -> bool:
        return not self._coeffs

    def x_support(self):
        """(min, max) base exponent over all coefficients, or None when zero."""
        lows = [p.min_exp for p in self._coeffs.values()]
        highs = [p.max_exp for p in self._coeffs.values()]
        return (min(lows), max(highs)) if lows else None

    # alignment

    def with_variables(self, variables) -> "IteratedSeries":
        """Re-express over a superset (in any order) of the current variables."""
        variables = tuple(variables)
        missing = set(self.variables) - set(variables)
        if missing:
            raise StructuralError(f"cannot drop variables {sorted(missing)}")
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for key, poly in self._coeffs.items():
            new = [0] * len(variables)
            for i, p in enumerate(pos):
                new[p] = key[i]
            out[tuple(new)] = poly
        return IteratedSeries(out, variables, self.order, self.base)

    def truncate(self, order: int) -> "IteratedSeries":
        if order > self.order:
            raise TruncationMismatch(f"cannot raise order {self.order} to {order}")
        return IteratedSeries(self._coeffs, self.variables, order, self.base)

    def _align(self, other: "IteratedSeries", need_same_order=True):
        if self.base != other.base:
            raise StructuralError(f"base mismatch: {self.base} vs {other.base}")
        if need_same_order and self.order != other.order:
            raise TruncationMismatch(f"truncation orders differ: {self.order} vs {other.order}")
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(variables), other.with_variables(variables)

    def _coerce(self, other):
        if isinstance(other, IteratedSeries):
            return other
        if isinstance(other, LaurentPoly):
            if other.var != self.base:
                raise StructuralError(f"base mismatch: {self.base} vs {other.var}")
            return IteratedSeries.from_laurent(other, self.variables, self.order, self.base)
        return IteratedSeries.from_laurent(as_fraction(other), self.variables, self.order, self.base)

    # arithmetic

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._align(other)
        out = dict(a._coeffs)
        for k, p in b._coeffs.items():
            out[k] = out[k] + p if k in out else p
        return IteratedSeries(out, a.variables, a.order, a.base)

    __radd__ = __add__

    def __neg__(self):
        return IteratedSeries({k: -p for k, p in self._coeffs.items()}, self.variables, self.order, self.base)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, IteratedSeries):
            return series_mul(self, other)
        if isinstance(other, LaurentPoly):
            return series_mul(self, self._coerce(other))
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return IteratedSeries({k: p * c for k, p in self._coeffs.items()}, self.variables, self.order, self.base)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return series_invert(self) ** (-n)
        out = self._coerce(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shift_base(self, k: int) -> "IteratedSeries":
        """Multiply by x**k."""
        return IteratedSeries({key: p.shift(k) for key, p in self._coeffs.items()},
                              self.variables, self.order, self.base)

    def map_base(self, fn) -> "IteratedSeries":
        return IteratedSeries({key: fn(p) for key, p in self._coeffs.items()},
                              self.variables, self.order, self.base)

    def base_derivation(self, eps: int) -> "IteratedSeries":
        """Apply x^eps d/dx coefficientwise."""
        return self.map_base(lambda p: apply_derivation(p, eps))

    def formal_derivative(self, var: str) -> "IteratedSeries":
        """d/d(var).  The result is known to one order less."""
        i = self.variables.index(var)
        out = {}
        for key, p in self._coeffs.items():
            if key[i]:
                new = list(key)
                new[i] -= 1
                out[tuple(new)] = p * key[i]
        return IteratedSeries(out, self.variables, max(self.order - 1, 0), self.base)

    def divide_by_variable(self, var: str) -> "IteratedSeries":
        """Exact division by a formal variable; requires no var-free terms."""
        i = self.variables.index(var)
        out = {}
        for key, p in self._coeffs.items():
            if key[i] == 0:
                raise StructuralError(f"series is not divisible by {var}")
            new = list(key)
            new[i] -= 1
            out[tuple(new)] = p
        if self.order == 0:
            raise TruncationMismatch("dividing an order-0 series leaves nothing known")
        return IteratedSeries(out, self.variables, self.order - 1, self.base)

    def __eq__(self, other):
        if not isinstance(other, IteratedSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        if self.order != other.order:
            raise TruncationMismatch(
                f"equality is only defined at a common truncation ({self.order} vs {other.order})")
        a, b = self._align(other)
        return a._coeffs == b._coeffs

    __hash__ = None

    def __repr__(self):
        if not self._coeffs:
            return f"0 + O({self.order + 1})"
        parts = []
        for key, p in self.items():
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, key) if k)
            parts.append(f"({p})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) + f" + O({self.order + 1})"


def series_mul(s: IteratedSeries, t: IteratedSeries) -> IteratedSeries:
    a, b = s._align(t)
    n = a.order
    out: dict[tuple, LaurentPoly] = {}
    b_items = list(b._coeffs.items())
    for k1, p1 in a._coeffs.items():
        d1 = sum(k1)
        for k2, p2 in b_items:
            if d1 + sum(k2) > n:
                continue
            key = tuple(i + j for i, j in zip(k1, k2))
            prod = laurent_mul(p1, p2)
            out[key] = out[key] + prod if key in out else prod
    return IteratedSeries(out, a.variables, n, a.base)


def _split_unit(s: IteratedSeries, window):
    """Write s = C*(1 + r) with C a Laurent monomial and r without constant term."""
    c0 = s.constant_term()
    if c0.is_zero():
        raise NotAUnit("constant term in the formal variables is zero")
    if not c0.is_monomial():
        raise WindowOverflow(
            f"constant term {c0} is not a monomial; its inverse in Q(({s.base})) "
            f"has infinitely many terms beyond the window {window}", window)
    (e, c), = c0.items()
    inv = LaurentPoly.monomial(-e, 1 / c, s.base)
    r = s.map_base(lambda p: laurent_mul(p, inv)) - 1
    return e, c, r


def _one_plus_power(r: IteratedSeries, exponent) -> IteratedSeries:
    """(1 + r)**exponent by the binomial series; r must have zero constant term."""
    out = r._coerce(1)
    rn = r._coerce(1)
    for n in range(1, r.order + 1):
        rn = rn * r
        if rn.is_zero():
            break
        out = out + rn * binomial(exponent, n)
    return out


def series_power(s: IteratedSeries, exponent, window=DEFAULT_WINDOW) -> IteratedSeries:
    """s**exponent for any rational exponent, s a unit with monomial leading term.

    A fractional exponent needs the leading monomial to be a perfect power;
    this helper only supports integer exponents on the leading monomial.
    """
    e, c, r = _split_unit(s, window)
    exponent = as_fraction(exponent)
    if exponent.denominator != 1:
        raise StructuralError("fractional powers of a Laurent monomial are not in Q((x))")
    k = exponent.numerator
    lead = LaurentPoly.monomial(e * k, c ** k, s.base)
    return _one_plus_power(r, k).map_base(lambda p: laurent_mul(p, lead))


def series_invert(s: IteratedSeries, window=DEFAULT_WINDOW) -> IteratedSeries:
    """Multiplicative inverse within the truncation.

    The formal-constant term must be a Laurent monomial c*x^e.  Then
    s = c x^e (1 + r) and s^-1 = c^-1 x^-e * sum (-r)^n, which is exact.
    """
    return series_power(s, -1, window)


def substitute(s: IteratedSeries, var: str, t, *, exact_polynomial: bool = False,
               window=DEFAULT_WINDOW) -> IteratedSeries:
    """Compose: replace ``var`` in ``s`` by the series ``t``.

    ``var`` may be a formal variable of ``s`` (then ``t`` needs zero formal
    constant term, unless ``exact_polynomial`` asserts that ``s`` is a
    polynomial in ``var`` that is fully known) or the base variable (then
    ``t`` must have a monomial leading term so negative powers expand).
    The result is valid to min(order of s, order of t).
    """
    if not isinstance(t, IteratedSeries):
        t = IteratedSeries.from_laurent(t if isinstance(t, LaurentPoly) else as_fraction(t),
                                        (), s.order, s.base)
    if t.base != s.base:
        raise SubstitutionError(f"base mismatch: {s.base} vs {t.base}")
    order = min(s.order, t.order)
    if var == s.base:
        return _substitute_base(s, t, order, window)
    if var not in s.variables:
        return s.truncate(order) if order < s.order else s
    c0 = t.constant_term()
    if not c0.is_zero() and not exact_polynomial:
        raise SubstitutionError(
            f"cannot substitute a series with nonzero constant term {c0} into formal slot {var}")
    i = s.variables.index(var)
    rest = tuple(v for v in s.variables if v != var)
    result_vars = rest + tuple(v for v in t.variables if v not in rest)
    tt = t.with_variables(result_vars)
    if tt.order > order:
        tt = tt.truncate(order)
    powers = [tt._coerce(1)]
    for _ in range(max((key[i] for key in s._coeffs), default=0)):
        powers.append(powers[-1] * tt)
    out = IteratedSeries({}, result_vars, order, s.base)
    for key, p in s._coeffs.items():
        others = key[:i] + key[i + 1:]
        mono_key = tuple(others[rest.index(v)] if v in rest else 0 for v in result_vars)
        out = out + IteratedSeries({mono_key: p}, result_vars, order, s.base) * powers[key[i]]
    return out


def _substitute_base(s: IteratedSeries, t: IteratedSeries, order, window) -> IteratedSeries:
    try:
        e0, c0, r = _split_unit(t, window)
    except NotAUnit as exc:
        raise SubstitutionError(f"cannot substitute into the base slot: {exc}") from exc
    except WindowOverflow as exc:
        raise SubstitutionError(f"cannot substitute into the base slot: {exc}") from exc
    result_vars = s.variables + tuple(v for v in t.variables if v not in s.variables)
    r = r.with_variables(result_vars)
    if r.order > order:
        r = r.truncate(order)
    # powers of r, shared by every exponent
    rpow = [r._coerce(1)]
    for _ in range(order):
        rpow.append(rpow[-1] * r)
    cache: dict[int, IteratedSeries] = {}

    def t_power(e: int) -> IteratedSeries:
        if e not in cache:
            acc = IteratedSeries({}, result_vars, order, s.base)
            for n in range(order + 1):
                b = binomial(e, n)
                if b and not rpow[n].is_zero():
                    acc = acc + rpow[n] * b
            lead = LaurentPoly.monomial(e0 * e, c0 ** e, s.base)
            cache[e] = acc.map_base(lambda p: laurent_mul(p, lead))
        return cache[e]

    s_aligned = s.with_variables(result_vars)
    out = IteratedSeries({}, result_vars, order, s.base)
    for key, poly in s_aligned._coeffs.items():
        if sum(key) > order:
            continue
        acc = IteratedSeries({}, result_vars, order, s.base)
        for e, c in poly.items():
            acc = acc + t_power(e) * c
        mono = IteratedSeries({key: LaurentPoly.constant(1, s.base)}, result_vars, order, s.base)
        out = out + mono * acc
    return out


def exp_series_coefficients(n: int):
    return [Fraction(1, factorial(k)) for k in range(n + 1)]
