"""phi_eps-coordinated module checks on concrete vacuum modules.

W is the vacuum module of the eps-affinized Lie algebra, on which a
generator a acts by the field

    Y_W(a, x) = sum_n L(a, n) x^(-n-2+2 eps).

Fields are represented by their coefficients: ``field.coeff(e, word)`` is
the x^e coefficient applied to a PBW word of W.  A coefficient at x^e maps
degree d to degree d + e + field.delta, so every coefficient of a graded
component is a finite exact computation.

The Y_E product of two fields A, B with locality order k is

    (A E_j B)(x) = [z^(-j-1)] (phi(x,z) - x)^(-k) ((x1 - x)^k A(x1) B(x))|_{x1 = phi(x,z)}.

Writing phi = x U(t) and (phi - x)/z = x^eps H(t) with t = z x^(eps-1),
the substitution only needs the scalar tables [U^p]_{t^r} and [H^q]_{t^r}.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian
from math import comb, factorial

from .associate import h_series, phi_series
from .deltacalc import DeltaExpression, falling_twisted, mul_difference_power, residue_x1
from .errors import DomainError, LocalityError, StructuralError, WindowOverflow
from .liealg import LieAlgebraConfig, LieElement, bracket_basis
from .report import Report, timed
from .series import binomial
from .vacmod import (
    ModuleConfig,
    PBWVector,
    act,
    act_element,
    normal_form,
    vertex_mode,
    word_degree,
)

LOCALITY_ORDER = 4


# --- scalar power-series tables ---------------------------------------------------

def _u_coeffs(eps: int, n: int) -> list:
    """U(t) with phi_eps(x, z) = x U(z x^(eps-1))."""
    d = eps - 1
    out = []
    for k in range(n + 1):
        c = Fraction(1)
        for j in range(k):
            c *= 1 + j * d
        out.append(c / factorial(k))
    return out


def _mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _unit_power(coeffs, p: int, n: int) -> list:
    """(sum c_k t^k)^p for c_0 = 1 and any integer p, to order n."""
    if coeffs[0] != 1:
        raise StructuralError("leading coefficient must be 1")
    r = [Fraction(0)] + list(coeffs[1: n + 1])
    r += [Fraction(0)] * (n + 1 - len(r))
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    rn = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        rn = _mul(rn, r, n)
        b = binomial(p, m)
        if b:
            out = [o + b * x for o, x in zip(out, rn)]
    return out


@lru_cache(maxsize=None)
def mu_table(eps: int, p: int, n: int) -> tuple:
    """[phi^p]_{z^r} = mu_r(p) x^(p + r(eps-1)) for r <= n."""
    return tuple(_unit_power(_u_coeffs(eps, n), p, n))


@lru_cache(maxsize=None)
def h_power_table(eps: int, q: int, n: int) -> tuple:
    """[h^q]_{z^r} = eta_r x^(q eps + r(eps-1)) for r <= n."""
    u = _u_coeffs(eps, n + 1)
    return tuple(_unit_power(u[1:], q, n))


@lru_cache(maxsize=None)
def g_power_table(eps: int, q: int, n: int) -> tuple:
    """(g(z)/z)^q where f_eps(x, z) = x^(1-eps) g(z); coefficients of z^0..z^n."""
    if eps == 1:
        g = [Fraction((-1) ** k, k + 1) for k in range(n + 1)]  # log(1+z)/z
    else:
        g = [binomial(1 - eps, k + 1) / (1 - eps) for k in range(n + 1)]
    return tuple(_unit_power(g, q, n))


# --- fields --------------------------------------------------------------------

class Field:
    """A vertex-operator-like series acting on the PBW basis of W."""

    def __init__(self, cfg: ModuleConfig, delta: int):
        self.cfg = cfg
        self.delta = delta
        self._cache: dict = {}

    def out_degree(self, e: int, word) -> int:
        return word_degree(word) + e + self.delta

    def coeff(self, e: int, word) -> PBWVector:
        key = (e, word)
        hit = self._cache.get(key)
        if hit is None:
            if self.out_degree(e, word) < 0:
                hit = PBWVector()
            else:
                hit = self._coeff(e, word)
            self._cache[key] = hit
        return hit

    def _coeff(self, e, word) -> PBWVector:
        raise NotImplementedError

    def apply(self, e: int, v: PBWVector) -> PBWVector:
        out = PBWVector(overflow=v.overflow)
        for word, c in v.terms.items():
            out = out + self.coeff(e, word) * c
        return out


class GeneratorField(Field):
    """Y_W(a, x): the x^e coefficient is L(a, 2eps - 2 - e)."""

    def __init__(self, cfg, index):
        super().__init__(cfg, 2 - 2 * cfg.epsilon)
        self.index = index

    def _coeff(self, e, word):
        return act(self.cfg, (self.index, 2 * self.cfg.epsilon - 2 - e), PBWVector.word(word))

    def __repr__(self):
        return f"Y({self.index})"


class IdentityField(Field):
    def __init__(self, cfg):
        super().__init__(cfg, 0)

    def _coeff(self, e, word):
        return PBWVector.word(word) if e == 0 else PBWVector()

    def __repr__(self):
        return "1"


class TwistedDerivative(Field):
    """(1/k!) (x^eps d/dx)^k F."""

    def __init__(self, inner: Field, k: int):
        eps = inner.cfg.epsilon
        super().__init__(inner.cfg, inner.delta + k * (1 - eps))
        self.inner, self.k = inner, k

    def _coeff(self, e, word):
        d = self.cfg.epsilon - 1
        c = Fraction(1, factorial(self.k))
        for r in range(1, self.k + 1):
            c *= e - r * d
        if not c:
            return PBWVector()
        return self.inner.coeff(e - self.k * d, word) * c

    def __repr__(self):
        return f"D^{self.k}{self.inner!r}"


class LinearField(Field):
    def __init__(self, cfg, parts):
        parts = [(Fraction(c), f) for c, f in parts if c]
        deltas = {f.delta for _, f in parts}
        if len(deltas) > 1:
            raise StructuralError("cannot add fields of different weight")
        super().__init__(cfg, deltas.pop() if deltas else 0)
        self.parts = parts

    def out_degree(self, e, word):
        return word_degree(word) + e + self.delta if self.parts else -1

    def _coeff(self, e, word):
        out = PBWVector()
        for c, f in self.parts:
            out = out + f.coeff(e, word) * c
        return out


class YEProduct(Field):
    """A E_j B with locality order k; locality is asserted per coefficient."""

    def __init__(self, A: Field, B: Field, j: int, k: int = LOCALITY_ORDER, check_locality=True):
        eps = A.cfg.epsilon
        super().__init__(A.cfg, A.delta + B.delta + (-j - 1) * (1 - eps))
        self.A, self.B, self.j, self.k = A, B, j, k
        self.check_locality = check_locality
        self.locality_checked = 0

    def _ordered(self, p, s, word, ab: bool) -> PBWVector:
        k, A, B = self.k, self.A, self.B
        out = PBWVector()
        for i in range(k + 1):
            c = comb(k, i) * (-1) ** (k - i)
            if ab:
                out = out + A.apply(p - i, B.coeff(s - k + i, word)) * c
            else:
                out = out + B.apply(s - k + i, A.coeff(p - i, word)) * c
        return out

    def local_coefficient(self, p: int, s: int, word) -> PBWVector:
        """Coefficient of x1^p x^s in (x1 - x)^k A(x1) B(x) applied to ``word``.

        Either operator order gives it (that is locality).  The order with the
        lower intermediate degree is used; when both fit under the working cap
        they are computed and compared.
        """
        d, cap = word_degree(word), self.cfg.degree_cap
        mid_ab = d + s + self.B.delta  # highest intermediate degree, A(x1) B(x) order
        mid_ba = d + p + self.A.delta
        if self.check_locality and max(mid_ab, mid_ba) <= cap:
            ab = self._ordered(p, s, word, True)
            ba = self._ordered(p, s, word, False)
            self.locality_checked += 1
            if ab != ba:
                raise LocalityError(f"(x1-x2)^{self.k} locality fails for {self.A!r}, {self.B!r} "
                                    f"at x1^{p} x2^{s} on {word}")
            return ab
        return self._ordered(p, s, word, mid_ab <= mid_ba)

    def _coeff(self, e, word):
        eps = self.cfg.epsilon
        k, j = self.k, self.j
        top = k - j - 1
        if top < 0:
            return PBWVector()
        d = word_degree(word)
        P = e + k * eps - top * (eps - 1)
        eta = h_power_table(eps, -k, top)
        out = PBWVector()
        for p in range(-d - self.A.delta, P + d + self.B.delta + 1):
            mu = mu_table(eps, p, top)
            weight = sum((eta[top - r] * mu[r] for r in range(top + 1)), Fraction(0))
            if weight:
                out = out + self.local_coefficient(p, P - p, word) * weight
        return out

    def __repr__(self):
        return f"({self.A!r} E_{self.j} {self.B!r})"


class ClassicalField(Field):
    """u_n of the eps = 0 vertex algebra via the iterate formula (x^e <-> n = -e-1)."""

    def __init__(self, cfg: ModuleConfig, V: ModuleConfig, u: PBWVector):
        if cfg.epsilon != 0:
            raise DomainError("classical fields live at eps = 0")
        degs = u.degrees()
        if len(degs) > 1:
            raise StructuralError("classical fields need a homogeneous vector")
        super().__init__(cfg, degs.pop() if degs else 0)
        self.V, self.u = V, u

    def out_degree(self, e, word):
        return word_degree(word) + e + self.delta if not self.u.is_zero() else -1

    def _coeff(self, e, word):
        return vertex_mode(self.V, self.u, -e - 1, PBWVector.word(word))


class FieldFactory:
    """Y_W(v, x) for vectors v of the eps = 0 vacuum vertex algebra V."""

    def __init__(self, cfg: ModuleConfig):
        self.cfg = cfg
        self._gen = {}
        self._words = {}

    def generator(self, index) -> Field:
        if index not in self._gen:
            self._gen[index] = GeneratorField(self.cfg, index)
        return self._gen[index]

    def of_word(self, word) -> Field:
        word = tuple(word)
        if word in self._words:
            return self._words[word]
        if not word:
            f = IdentityField(self.cfg)
        elif len(word) == 1:
            c, m = word[0]
            f = self.generator(c)
            if m != -2:
                f = TwistedDerivative(f, -m - 2)
        else:
            (c, m), rest = word[0], word[1:]
            f = YEProduct(self.generator(c), self.of_word(rest), m + 1, word_degree(rest) + 2)
        self._words[word] = f
        return f

    def of_vector(self, v: PBWVector) -> Field:
        return LinearField(self.cfg, [(c, self.of_word(w)) for w, c in v.items()])


# --- commutator formula (Lie-valued) -----------------------------------------------

def _mode(eps, e):
    return 2 * eps - 2 - e


def commutator_lhs(lie: LieAlgebraConfig, a, b, e1, e2) -> LieElement:
    """Coefficient of x1^e1 x2^e2 in [Y(a,x1), Y(b,x2)]."""
    eps = lie.epsilon
    return bracket_basis(lie, a, _mode(eps, e1), b, _mode(eps, e2))


def commutator_rhs(lie: LieAlgebraConfig, a, b, e1, e2) -> LieElement:
    """Same coefficient of sum_j Y(a_j b, x2) (1/j!) (x2^eps d/dx2)^j x1^(eps-1) delta(x2/x1).

    a_0 b = D(ba) acts by x^eps d/dx Y(ba), a_1 b = ab + ba,
    a_3 b = (1/2) <a,b> c, other j give 0.
    """
    eps = lie.epsilon
    A = lie.algebra
    ea, eb = A.unit_vector(a), A.unit_vector(b)
    ab, ba = A.mul(ea, eb), A.mul(eb, ea)
    n = eps - 1 - e1  # delta index fixed by the x1 exponent
    out = LieElement()
    for j in (0, 1, 3):
        dexpr = DeltaExpression.derivative(eps, j, Fraction(1, factorial(j)))
        f = e2 - n - j * (eps - 1)  # exponent carried by the field
        scalar = dexpr.coefficient(e1, e2 - f)
        if not scalar:
            continue
        if j == 0:
            c = f - (eps - 1)
            field = LieElement({(k, _mode(eps, f - (eps - 1))): c * x for k, x in enumerate(ba)})
        elif j == 1:
            field = LieElement({(k, _mode(eps, f)): x + y for k, (x, y) in enumerate(zip(ab, ba))})
        else:
            field = LieElement({}, Fraction(1, 2) * A.pair(ea, eb) if f == 0 else 0)
        out = out + field * scalar
    return out


def _at_level(u: LieElement, level) -> LieElement:
    return LieElement(u.terms, u.central * level)


def check_commutator_formula(algebra, eps: int, level=1, window: int = 6) -> Report:
    """Both sides as Lie-valued series, compared at x1^-p x2^-q for |p|, |q| <= window."""
    lie = LieAlgebraConfig(algebra, eps, with_center=True)
    level = Fraction(level)
    rep = Report("phicoord", "commutator-formula",
                 {"algebra": algebra.name, "eps": eps, "level": level, "window": window},
                 window={"p": window, "q": window})
    data = {}
    with timed(rep):
        for a, b in _cartesian(range(algebra.dim), repeat=2):
            for p, q in _cartesian(range(-window, window + 1), repeat=2):
                e1, e2 = -p, -q
                lhs = _at_level(commutator_lhs(lie, a, b, e1, e2), level)
                rhs = _at_level(commutator_rhs(lie, a, b, e1, e2), level)
                data[(a, b, e1, e2)] = rhs
                rep.compare({"a": algebra.basis[a], "b": algebra.basis[b], "x1": e1, "x2": e2}, lhs, rhs)
    rep.data = data
    return rep


def faithfulness_lemma_check(algebra, eps: int, window: int = 4, jmax: int = 8) -> Report:
    """Recover the coefficients A^j of the commutator by residues and compare with a_j b.

    Res_x1 x1^-eps (x1-x2)^n (1/j!) D^j x1^(eps-1) delta = rho(n, j) x2^(n + j(eps-1)),
    with rho(n, j) = 0 for j < n and rho(n, n) = 1, so the system is triangular with
    unit diagonal and the solution is unique.
    """
    lie = LieAlgebraConfig(algebra, eps, with_center=True)
    rep = Report("phicoord", "faithfulness", {"algebra": algebra.name, "eps": eps, "jmax": jmax},
                 window={"x2": window})
    d = eps - 1

    @lru_cache(maxsize=None)
    def rho(n, j):
        dexpr = DeltaExpression.derivative(eps, j, Fraction(1, factorial(j)))
        x2 = n + j * d
        prod = mul_difference_power(dexpr, n, ((eps - 1, eps - 1), (x2, x2)))
        return residue_x1(prod.mul_monomial((-eps, 0))).coefficient(x2)

    with timed(rep):
        for n in range(jmax + 1):
            rep.record(rho(n, n) == 1, {"diagonal": n})
            for j in range(n):
                rep.record(rho(n, j) == 0, {"below-diagonal": (n, j)})
        A = algebra
        for a, b in _cartesian(range(A.dim), repeat=2):

            def res(n, K):
                """[x2^K] Res_x1 x1^-eps (x1-x2)^n [Y(a,x1), Y(b,x2)]."""
                out = LieElement()
                for i in range(n + 1):
                    out = out + commutator_lhs(lie, a, b, eps - 1 - i, K - n + i) * (comb(n, i) * (-1) ** (n - i))
                return out

            @lru_cache(maxsize=None)
            def solved(n, k):
                K = k + n * eps
                acc = res(n, K)
                for j in range(n + 1, jmax + 1):
                    r = rho(n, j)
                    if r:
                        acc = acc - solved(j, K - n - j * d) * r
                return acc

            ea, eb = A.unit_vector(a), A.unit_vector(b)
            ab, ba = A.mul(ea, eb), A.mul(eb, ea)
            for k in range(-window, window + 1):
                expected = {
                    0: LieElement({(i, _mode(eps, k - d)): (k - d) * x for i, x in enumerate(ba)}),
                    1: LieElement({(i, _mode(eps, k)): x + y for i, (x, y) in enumerate(zip(ab, ba))}),
                    3: LieElement({}, Fraction(1, 2) * A.pair(ea, eb) if k == 0 else 0),
                }
                for j in range(jmax + 1):
                    rep.compare({"a": A.basis[a], "b": A.basis[b], "j": j, "x2": k},
                                solved(j, k), expected.get(j, LieElement()))
    return rep


# --- module-level checks ---------------------------------------------------------

class PhiModule:
    """The pair (V at eps = 0, W at eps) sharing algebra and level."""

    def __init__(self, algebra, eps: int, level=1, degree_cap: int = 10, v_cap: int = 16, slack: int = 6):
        if eps not in (0, 1, 2):
            raise DomainError("module-level checks need eps in {0, 1, 2} (W graded from 0)")
        self.G = degree_cap
        self.W = ModuleConfig(algebra, eps, level, degree_cap + slack)
        self.V = ModuleConfig(algebra, 0, level, v_cap)
        self.fields = FieldFactory(self.W)
        self.eps = eps
        self.algebra = algebra

    def ensure_cap(self, cap: int) -> None:
        """Rebuild W with a working cap of at least ``cap`` (caches are dropped)."""
        if cap > self.W.degree_cap:
            self.W = ModuleConfig(self.algebra, self.eps, self.W.level, cap)
            self.fields = FieldFactory(self.W)

    @property
    def delta_gen(self):
        return 2 - 2 * self.eps

    def y_ab(self, a, b, j) -> PBWVector:
        return vertex_mode(self.V, self.V.generator(a), j, self.V.generator(b))


def depth_two_vector(mod: PhiModule) -> PBWVector:
    """The PBW monomial L(e_1, eps-3) L(e_last, eps-2) 1 (two creation letters, already sorted)."""
    eps, last = mod.eps, mod.algebra.dim - 1
    return PBWVector.word(((0, eps - 3), (last, eps - 2)))


def ye_product(mod: PhiModule, a, b, j: int, w: PBWVector, max_degree: int | None = None) -> dict:
    """{x-exponent: vector} for (Y(a) E_j Y(b))(x) w on output degrees 0..max_degree."""
    G = mod.G if max_degree is None else max_degree
    F = YEProduct(mod.fields.generator(a), mod.fields.generator(b), j)
    out = {}
    for word, c in w.terms.items():
        base = word_degree(word) + F.delta
        for D in range(0, G + 1):
            e = D - base
            out[e] = out.get(e, PBWVector()) + F.coeff(e, word) * c
    bad = sorted(e for e, v in out.items() if v.overflow)
    if bad:
        raise WindowOverflow(f"x-exponents {bad} need degrees above the working cap",
                             {"G": G, "cap": mod.W.degree_cap})
    return out


def check_ye_homomorphism(mod: PhiModule, w: PBWVector, jmax: int = 8) -> Report:
    """Y(a) E_j Y(b) = Y_W(a_j b) on w for 0 <= j <= jmax, all basis pairs."""
    A = mod.algebra
    G = mod.G
    rep = Report("phicoord", "ye-product", {"eps": mod.eps, "level": mod.W.level, "G": G, "jmax": jmax},
                 window={"G": G})
    with timed(rep):
        for a, b in _cartesian(range(A.dim), repeat=2):
            for j in range(jmax + 1):
                got = ye_product(mod, a, b, j, w)
                field = mod.fields.of_vector(mod.y_ab(a, b, j))
                for e, vec in sorted(got.items()):
                    want = field.apply(e, w)
                    rep.overflow |= vec.overflow or want.overflow
                    rep.compare({"a": A.basis[a], "b": A.basis[b], "j": j, "x": e}, vec, want)
    if rep.overflow:
        rep.inconclusive("degree cap overflow")
    return rep


def _axiom_sides(mod: PhiModule, a, b, w: PBWVector, order: int):
    """Yield (r, D, lhs, rhs) for the phi-module axiom at z^r and output degree D."""
    eps, G, dg = mod.eps, mod.G, mod.delta_gen
    Ya, Yb = mod.fields.generator(a), mod.fields.generator(b)
    local = YEProduct(Ya, Yb, 0)  # only used for its locality-checked coefficients
    theta = h_power_table(eps, LOCALITY_ORDER, order)
    fields = {j: mod.fields.of_vector(mod.y_ab(a, b, j)) for j in range(3 - order, 4)}
    for word, c in w.terms.items():
        d = word_degree(word)
        for r in range(order + 1):
            mu_r = {}
            for D in range(0, G + 1):
                S = D - d - 2 * dg  # p + s
                E = S + r * (eps - 1)
                lhs = PBWVector()
                for p in range(-d - dg, S + d + dg + 1):
                    if p not in mu_r:
                        mu_r[p] = mu_table(eps, p, order)[r]
                    if mu_r[p]:
                        lhs = lhs + local.local_coefficient(p, S - p, word) * mu_r[p]
                rhs = PBWVector()
                for j in range(3 - r, 4):
                    q = r - 3 + j
                    e = E - 4 * eps - q * (eps - 1)
                    if theta[q]:
                        rhs = rhs + fields[j].coeff(e, word) * theta[q]
                yield r, D, E, lhs * c, rhs * c


def check_phi_module_axiom(mod: PhiModule, a, b, w: PBWVector, order: int = 6) -> Report:
    """(x1-x2)^4 Y(a,x1) Y(b,x2) w at x1 = phi(x2, x0) equals (phi(x2,x0) - x2)^4 Y_W(Y(a,x0) b, x2) w."""
    A = mod.algebra
    rep = Report("phicoord", "phi-module-axiom",
                 {"eps": mod.eps, "level": mod.W.level, "a": A.basis[a], "b": A.basis[b],
                  "w": repr(w), "N": order, "G": mod.G},
                 window={"N": order, "G": mod.G})
    with timed(rep):
        for r, D, E, lhs, rhs in _axiom_sides(mod, a, b, w, order):
            rep.overflow |= lhs.overflow or rhs.overflow
            rep.compare({"z": r, "x": E, "degree": D}, lhs, rhs)
    if rep.overflow:
        rep.inconclusive("degree cap overflow")
    return rep


def jacobi_type_check(mod: PhiModule, a, b, w: PBWVector, order: int = 4, window: int = 5,
                      rmin: int = -5, commutator: Report | None = None,
                      classical: bool = False) -> Report:
    """Three-term Jacobi-type identity applied to w, coefficientwise in x1^p x2^q z^r.

    LHS: (x2 z)^-1 delta((x1-x2)/(x2 z)) Y(a,x1)Y(b,x2) - (x2 z)^-1 delta((x2-x1)/(-x2 z)) Y(b,x2)Y(a,x1).
    RHS: x1^-1 delta(x2(1+z)/x1) Y_W(Y(a, f_eps(x2,z)) b, x2).
    With ``commutator`` (a commutator-formula report on the same algebra, eps and
    level) the Res_z reduction is compared with its data as well.  With
    ``classical`` (eps = 0 only) the right side uses the iterate-formula vertex
    operators of V instead of Y_E products, which makes it the classical Jacobi
    identity with x0 = x2 z.
    """
    eps, G, dg = mod.eps, mod.G, mod.delta_gen
    A = mod.algebra
    dmax = max((word_degree(x) for x in w.terms), default=0)
    mod.ensure_cap(dmax + window - rmin + dg + 1)
    Ya, Yb = mod.fields.generator(a), mod.fields.generator(b)
    rep = Report("phicoord", "jacobi-type",
                 {"eps": eps, "level": mod.W.level, "a": A.basis[a], "b": A.basis[b], "w": repr(w),
                  "N": order, "window": window, "classical": classical},
                 window={"r": (rmin, order), "p": window, "q": window, "G": G})
    fields = {}

    def field(j):
        if j not in fields:
            v = mod.y_ab(a, b, j)
            fields[j] = ClassicalField(mod.W, mod.V, v) if classical else mod.fields.of_vector(v)
        return fields[j]

    def lhs(p, q, r, word):
        m = -r - 1
        qi = q - r
        d = word_degree(word)
        out = PBWVector()
        kmax = qi + d + dg
        for k in range(0, kmax + 1):
            c = binomial(m, k) * (-1) ** k
            if c:
                out = out + Ya.apply(p - m + k, Yb.coeff(qi - k, word)) * c
        kmax = p + d + dg
        for k in range(0, kmax + 1):
            c = (-1) ** (m % 2) * binomial(m, k) * (-1) ** k
            if c:
                out = out - Yb.apply(qi - m + k, Ya.coeff(p - k, word)) * c
        return out

    def rhs(p, q, r, word):
        md = -p - 1
        out = PBWVector()
        for j in range(-r - 1, 4):
            n = -j - 1
            gam = g_power_table(eps, n, order + 8)
            e = q - md - (1 - eps) * n
            for r1 in range(0, r - n + 1):
                c = binomial(md, r1) * gam[r - r1 - n]
                if c:
                    out = out + field(j).coeff(e, word) * c
        return out

    with timed(rep):
        for word, cw in w.terms.items():
            d = word_degree(word)
            for p, q in _cartesian(range(-window, window + 1), repeat=2):
                D = d + p + q + 1 + 2 * dg
                if D < 0 or D > G:
                    continue
                for r in range(rmin, order + 1):
                    l, rr = lhs(p, q, r, word) * cw, rhs(p, q, r, word) * cw
                    rep.overflow |= l.overflow or rr.overflow
                    rep.compare({"x1": p, "x2": q, "z": r}, l, rr)
        if commutator is not None:
            # Res_z x2 (...) is the commutator; compare with the Lie-level data acted on w
            for (ia, ib, e1, e2), u in commutator.data.items():
                if (ia, ib) != (a, b):
                    continue
                for word, cw in w.terms.items():
                    D = word_degree(word) + e1 + e2 + 2 * dg
                    if D < 0 or D > G:
                        continue
                    red = rhs(e1, e2 - 1, -1, word) * cw
                    want = (_act_no_center(mod.W, u, word) + PBWVector.word(word) * u.central) * cw
                    rep.overflow |= red.overflow or want.overflow
                    rep.compare({"res_z": True, "x1": e1, "x2": e2}, red, want)
    if rep.overflow:
        rep.inconclusive("degree cap overflow")
    return rep


def _act_no_center(W, u: LieElement, word):
    out = PBWVector()
    for g, c in u.terms.items():
        out = out + act(W, g, PBWVector.word(word)) * c
    return out


def check_tables(eps: int, order: int = 6) -> Report:
    """The scalar tables against the series of the associate module (phi^p and h^q)."""
    from .associate import phi as _phi
    from .series import LaurentPoly
    rep = Report("phicoord", "substitution-tables", {"eps": eps, "order": order})
    ph = _phi(eps, order).series
    hs = h_series(eps, order)
    for p in (-3, -1, 0, 1, 2, 5):
        pw = ph ** p if p >= 0 else None
        for r in range(order + 1):
            want = LaurentPoly.monomial(p + r * (eps - 1), mu_table(eps, p, order)[r])
            if pw is not None:
                rep.compare({"phi^p": p, "z": r}, pw.coefficient((r,)), want)
    for q in (1, 2, 4):
        pw = hs ** q
        for r in range(order + 1):
            want = LaurentPoly.monomial(q * eps + r * (eps - 1), h_power_table(eps, q, order)[r])
            rep.compare({"h^q": q, "z": r}, pw.coefficient((r,)), want)
    return rep


# --- eps = 0 degeneration -----------------------------------------------------------

def degeneration_check(algebra, level=1, degree_cap: int = 8, samples: int = 6) -> Report:
    """At eps = 0 the phi-coordinated objects are the classical ones.

    * phi_0 = x + z so mu_r(p) = C(p, r) and h = 1;
    * Y_W(u, x) built by Y_E products equals the iterate-formula vertex operator
      u_n of V (x^e <-> n = -e-1) on sampled monomials;
    * the phi-module axiom sides equal the classical weak-associativity sides
      computed with binomial expansions of (x2 + x0)^p and vertex_mode.
    """
    rep = Report("phicoord", "eps0-degeneration", {"algebra": algebra.name, "level": Fraction(level)},
                 window={"G": degree_cap})
    with timed(rep):
        for p in range(-6, 7):
            rep.compare({"mu": p}, list(mu_table(0, p, 6)), [binomial(p, r) for r in range(7)])
        rep.merge(check_tables(0, 6))
        mod = PhiModule(algebra, 0, level, degree_cap, v_cap=max(16, degree_cap + 8))
        words = [()] + [w for w in _sample_words(algebra.dim, 4)][:samples]
        for u in words:
            F = mod.fields.of_word(u)
            for w in words:
                for e in range(-6, 7):
                    D = word_degree(w) + e + F.delta
                    if D < 0 or D > degree_cap:
                        continue
                    got = F.coeff(e, w)
                    want = vertex_mode(mod.V, PBWVector.word(u), -e - 1, PBWVector.word(w))
                    rep.overflow |= got.overflow or want.overflow
                    rep.compare({"u": u, "w": w, "x": e}, got, want)
        # classical weak associativity with explicit binomials
        for a, b in _cartesian(range(algebra.dim), repeat=2):
            for w in (PBWVector.vacuum(), PBWVector.word(((0, -2),))):
                for r, D, E, lhs, rhs in _axiom_sides(mod, a, b, w, 4):
                    cl, cr = _classical_sides(mod, a, b, w, r, E)
                    rep.compare({"classical-lhs": (a, b, r, E)}, lhs, cl)
                    rep.compare({"classical-rhs": (a, b, r, E)}, rhs, cr)
        # commutator formula against the Borcherds commutator of V
        lie = LieAlgebraConfig(algebra, 0, with_center=True)
        probe = [PBWVector.vacuum(), PBWVector.word(((0, -2),))]
        for a, b in _cartesian(range(algebra.dim), repeat=2):
            ajb = {j: mod.y_ab(a, b, j) for j in range(4)}
            for e1, e2 in _cartesian(range(-4, 5), repeat=2):
                m, n = -e1 - 1, -e2 - 1
                u = _at_level(commutator_rhs(lie, a, b, e1, e2), mod.W.level)
                for w in probe:
                    word = next(iter(w.terms))
                    if word_degree(word) + e1 + e2 + 4 > degree_cap:
                        continue
                    got = _act_no_center(mod.W, u, word) + w * u.central
                    want = PBWVector()
                    for j in range(4):
                        want = want + vertex_mode(mod.V, ajb[j], m + n - j, w) * binomial(m, j)
                    rep.compare({"borcherds": (a, b, e1, e2)}, got, want)
        # Jacobi-type identity with f_0 = x z, both ways
        rep.compare({"f0": True}, list(g_power_table(0, 3, 6)), [1] + [0] * 6)
        for a, b in _cartesian(range(algebra.dim), repeat=2):
            for w in probe:
                phi_side = jacobi_type_check(mod, a, b, w, order=3, window=3)
                classical_side = jacobi_type_check(mod, a, b, w, order=3, window=3, classical=True)
                rep.merge(phi_side)
                rep.merge(classical_side)
    if rep.overflow:
        rep.inconclusive("degree cap overflow")
    return rep


def _sample_words(dim, max_degree):
    from .vacmod import pbw_monomials
    for d in range(2, max_degree + 1):
        yield from pbw_monomials(dim, d)


def _classical_sides(mod, a, b, w, r, E):
    """[x0^r x2^E] of (x0+x2)^4 Y(a, x0+x2) Y(b, x2) w and (x2+x0)^4 Y(Y(a,x0)b, x2) w via vertex_mode."""
    V = mod.V
    ua, ub = V.generator(a), V.generator(b)
    lhs = PBWVector()
    # (x1 - x2)^4 Y(a,x1)Y(b,x2) = sum F_{p,s} x1^p x2^s; x1 = x2 + x0 gives C(p, r) x2^(p-r) x0^r
    for word, c in w.terms.items():
        d = word_degree(word)
        S = E + r  # p + s
        for p in range(-d - 2, S + d + 3):
            s = S - p
            coeff = binomial(p, r)
            if not coeff:
                continue
            acc = PBWVector()
            for i in range(5):
                # x^e coefficient of Y(u, x) is u_{-e-1}
                inner = vertex_mode(V, ub, -(s - 4 + i) - 1, PBWVector.word(word))
                acc = acc + vertex_mode(V, ua, -(p - i) - 1, inner) * (comb(4, i) * (-1) ** (4 - i))
            lhs = lhs + acc * (coeff * c)
    rhs = PBWVector()
    # x0^4 sum_j Y(a_j b, x2) x0^(-j-1): the x0^r term has j = 3 - r
    j = 3 - r
    ajb = vertex_mode(V, ua, j, vertex_mode(V, PBWVector.vacuum(), -1, ub))
    rhs = vertex_mode(V, ajb, -E - 1, w)
    return lhs, rhs
