"""Batch verification front end: ``verify <spec> [--suite NAME]...``.

Spec files are line oriented.  Blank lines and ``#`` comments are ignored::

    algebra noncomm2d
    basis e1 e2
    e1 e1 = e1 + e2          # products; unlisted ones are 0
    e2 e1 = e2
    <e1, e1> = 1/12          # form entries; the transpose is implied
    eps 0 1 2
    level 1
    order 8
    degree-cap 10
    mode-window 4
    z-order 6
    suites associate delta novikov lie vertex mobius phicoord

Every coefficient must be an exact rational literal such as ``3``, ``-2``
or ``1/12``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import associate, deltacalc, liealg, novikov, phicoord, vacmod
from .errors import (
    DomainError,
    LocalityError,
    PhiVertexError,
    SpecSyntaxError,
    StructuralError,
    WindowOverflow,
)
from .novikov import AlgebraSpec
from .report import Report, Verdict, jsonable

SUITES = ("associate", "delta", "novikov", "lie", "vertex", "mobius", "phicoord")
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass
class SpecFile:
    algebra: AlgebraSpec
    eps: list = field(default_factory=lambda: [0, 1, 2])
    levels: list = field(default_factory=lambda: [Fraction(1)])
    order: int = 8
    degree_cap: int = 10
    mode_window: int = 4
    z_order: int = 6
    suites: list = field(default_factory=lambda: list(SUITES))
    path: str | None = None


# --- parsing -------------------------------------------------------------------

class _Line:
    def __init__(self, text, number, path):
        self.text, self.number, self.path = text, number, path

    def error(self, message, column=None):
        return SpecSyntaxError(message, self.number, column, self.path)

    def tokens(self, start=0, end=None):
        """(token, 1-based column) for whitespace-separated pieces of text[start:end]."""
        end = len(self.text) if end is None else end
        return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", self.text[:end]) if m.start() >= start]


def parse_rational(token: str, line: _Line, column: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise line.error(f"{token!r} is not an exact rational literal (use forms like 3, -2, 1/12)", column)
    if token.endswith("/0") or re.search(r"/0+\Z", token):
        raise line.error(f"zero denominator in {token!r}", column)
    return Fraction(token)


def _parse_combination(line: _Line, start: int, names: dict) -> dict:
    """'e1 + 1/2 e2 - 3*e3' or '0' -> {index: coefficient}."""
    text = line.text
    pieces = [(m.group(), m.start() + 1) for m in re.finditer(r"[+-]|\*|[^\s+*-]+", text[start:])]
    pieces = [(t, c + start) for t, c in pieces]
    if not pieces:
        raise line.error("missing right-hand side", len(text) + 1)
    if len(pieces) == 1 and _RATIONAL.match(pieces[0][0]) and Fraction(pieces[0][0]) == 0:
        return {}
    out: dict = {}
    i, sign, expect_term = 0, 1, True
    while i < len(pieces):
        tok, col = pieces[i]
        if tok in "+-":
            step = -1 if tok == "-" else 1
            sign = sign * step if expect_term else step
            expect_term = True
            i += 1
            continue
        if not expect_term:
            raise line.error(f"expected '+' or '-' before {tok!r}", col)
        coeff = Fraction(1)
        if tok not in names:
            coeff = parse_rational(tok, line, col)
            i += 1
            if i < len(pieces) and pieces[i][0] == "*":
                i += 1
            if i >= len(pieces) or pieces[i][0] not in names:
                where = pieces[i][1] if i < len(pieces) else len(text) + 1
                bad = pieces[i][0] if i < len(pieces) else "end of line"
                raise line.error(f"expected a basis name, got {bad!r}", where)
            tok, col = pieces[i]
        k = names[tok]
        out[k] = out.get(k, Fraction(0)) + sign * coeff
        sign, expect_term = 1, False
        i += 1
    if expect_term:
        raise line.error("dangling sign", pieces[-1][1])
    return {k: c for k, c in out.items() if c}


def parse_spec_text(text: str, path: str | None = None) -> SpecFile:
    name, basis, names = None, None, {}
    products: dict = {}
    form: dict = {}
    settings: dict = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        line = _Line(body, number, path)
        toks = line.tokens()
        if not toks:
            continue
        head, col = toks[0]
        if head == "algebra":
            if len(toks) != 2:
                raise line.error("usage: algebra NAME", col)
            name = toks[1][0]
        elif head == "basis":
            if basis is not None:
                raise line.error("basis declared twice", col)
            basis = [t for t, _ in toks[1:]]
            if not basis:
                raise line.error("empty basis", col)
            for t, c in toks[1:]:
                if not _NAME.match(t):
                    raise line.error(f"bad basis name {t!r}", c)
                if t in names:
                    raise line.error(f"duplicate basis name {t!r}", c)
                names[t] = len(names)
        elif head.startswith("<"):
            m = re.match(r"\s*<\s*([^,>\s]+)\s*,\s*([^,>\s]+)\s*>\s*=\s*(\S+)\s*\Z", body)
            if not m:
                raise line.error("form entries look like '<e1, e2> = 1/12'", col)
            if basis is None:
                raise line.error("declare the basis before form entries", col)
            i = _index(line, names, m.group(1), m.start(1) + 1)
            j = _index(line, names, m.group(2), m.start(2) + 1)
            value = parse_rational(m.group(3), line, m.start(3) + 1)
            for key in ((i, j), (j, i)):
                if key in form and form[key] != value:
                    raise line.error(f"asymmetric form: <{m.group(1)}, {m.group(2)}> = {value} but the "
                                     f"transposed entry is {form[key]}", col)
            form[(i, j)] = value
            form[(j, i)] = value
        elif head in ("eps", "level", "order", "degree-cap", "mode-window", "z-order", "suites"):
            settings[head] = (line, toks[1:])
        elif "=" in body:
            if basis is None:
                raise line.error("declare the basis before products", col)
            lhs_end = body.index("=")
            lhs = line.tokens(0, lhs_end)
            if len(lhs) != 2:
                raise line.error("products look like 'e1 e2 = ...'", col)
            i = _index(line, names, *lhs[0])
            j = _index(line, names, *lhs[1])
            if (i, j) in products:
                raise line.error(f"product {lhs[0][0]} {lhs[1][0]} given twice", col)
            products[(i, j)] = _parse_combination(line, lhs_end + 1, names)
        else:
            raise line.error(f"unknown statement {head!r}", col)
    if basis is None:
        raise SpecSyntaxError("no basis declared", None, None, path)
    spec = SpecFile(algebra=None, path=path)
    try:
        spec.algebra = AlgebraSpec.from_table(tuple(basis), products, form if form else None,
                                              name=name or (Path(path).stem if path else "algebra"))
    except StructuralError as exc:
        raise SpecSyntaxError(str(exc), None, None, path) from exc
    for key, (line, toks) in settings.items():
        if not toks:
            raise line.error(f"{key} needs a value", 1)
        if key == "suites":
            for t, c in toks:
                if t not in SUITES:
                    raise line.error(f"unknown suite {t!r}; choose from {', '.join(SUITES)}", c)
            spec.suites = [t for t, _ in toks]
        elif key == "level":
            spec.levels = [parse_rational(t, line, c) for t, c in toks]
        else:
            values = []
            for t, c in toks:
                if not re.match(r"[+-]?\d+\Z", t):
                    raise line.error(f"{key} takes integers, got {t!r}", c)
                values.append(int(t))
            if key == "eps":
                spec.eps = values
            else:
                if len(values) != 1:
                    raise line.error(f"{key} takes one integer", toks[1][1])
                setattr(spec, key.replace("-", "_"), values[0])
    return spec


def _index(line, names, token, column):
    if token not in names:
        raise line.error(f"unknown basis element {token!r}", column)
    return names[token]


def parse_spec(path) -> SpecFile:
    """Read a spec file; a bare bundled name such as ``noncomm2d`` also works."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        bundled = resources.files("phivertex") / "data" / f"{path}.spec"
        if bundled.is_file():
            return parse_spec_text(bundled.read_text(), str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise SpecSyntaxError(f"cannot read spec: {exc.strerror}", None, None, str(path)) from exc
    return parse_spec_text(text, str(path))


# --- running -------------------------------------------------------------------

def _guarded(suite, anchor, params, fn) -> list:
    """Run a check; window overflows become INCONCLUSIVE, broken preconditions FAIL."""
    try:
        out = fn()
    except WindowOverflow as exc:
        rep = Report(suite, anchor, params, window=exc.window, overflow=True)
        rep.inconclusive(str(exc))
        return [rep]
    except (DomainError, StructuralError, LocalityError) as exc:
        rep = Report(suite, anchor, params)
        rep.record(False, {"error": type(exc).__name__, "witness": getattr(exc, "witness", None)})
        rep.note = str(exc)
        return [rep]
    return out if isinstance(out, list) else [out]


def _is_frobenius_line(A) -> bool:
    return A.dim == 1 and A.product[0][0][0] == 1 and A.form is not None and A.form[0][0] != 0


def _tag(reports, **params):
    for r in reports:
        for k, v in params.items():
            r.params.setdefault(k, v)
    return reports


def run_suites(spec: SpecFile, suites=None) -> list:
    A = spec.algebra
    chosen = [s for s in SUITES if s in (suites or spec.suites)]
    M, G, N = spec.mode_window, spec.degree_cap, spec.order
    out: list = []
    for suite in chosen:
        if suite == "associate":
            for e in spec.eps:
                p = {"eps": e, "N": N}
                out += _guarded(suite, "associate-axioms", p, lambda: associate.check_associate_axioms(e, N))
                out += _guarded(suite, "closed-form", p, lambda: associate.check_closed_form(e, N))
                out += _guarded(suite, "units-h-g-f", p, lambda: associate.check_unit_lemmas(e, N))
        elif suite == "delta":
            out += _guarded(suite, "three-term-delta", {}, lambda: deltacalc.three_term_delta_check())
            for e in spec.eps:
                p = {"eps": e}
                out += _guarded(suite, "difference-power-vanishing", p, lambda: deltacalc.check_vanishing(e))
                out += _guarded(suite, "residue-formula", p,
                                lambda: deltacalc.check_residue_formula(e, as_stated=False))
                out += _guarded(suite, "delta-symmetry", p, lambda: deltacalc.check_delta_symmetry(e))
        elif suite == "novikov":
            out += _tag(_guarded(suite, "novikov-identities", {}, lambda: novikov.is_left_novikov(A)),
                        algebra=A.name)
            if A.form is not None:
                out += _tag(_guarded(suite, "invariant-form", {}, lambda: novikov.check_form(A)), algebra=A.name)
        elif suite == "lie":
            for e in spec.eps:
                p = {"algebra": A.name, "eps": e, "M": M}

                def cfg(e=e):
                    return liealg.LieAlgebraConfig(A, e, with_center=A.form is not None)

                out += _tag(_guarded(suite, "lie-axioms", p, lambda: liealg.verify_lie(cfg(), M)), **p)
                if A.form is not None:
                    out += _tag(_guarded(suite, "cocycle", p, lambda: liealg.verify_cocycle(cfg(), M)), **p)
                if e == 0 and _is_frobenius_line(A):
                    out += _tag(_guarded(suite, "virasoro", p, lambda: liealg.virasoro_check(cfg(), M)), **p)
        elif suite == "vertex":
            for lvl in spec.levels:
                p = {"algebra": A.name, "level": lvl, "G": G}

                def mcfg(lvl=lvl):
                    return vacmod.ModuleConfig(A, 0, lvl, G)

                out += _tag(_guarded(suite, "generator-relations", p,
                                     lambda: vacmod.check_generator_relations(mcfg())), **p)
                out += _tag(_guarded(suite, "grading", p, lambda: vacmod.grading_check(mcfg())), **p)
                if lvl != 0:
                    out += _tag(_guarded(suite, "novikov-recovery", p,
                                         lambda: vacmod.check_recovery(mcfg())), **p)
        elif suite == "mobius":
            for lvl in spec.levels:
                p = {"algebra": A.name, "level": lvl, "M": M}
                out += _tag(_guarded(suite, "moebius-criterion", p,
                                     lambda: vacmod.mobius_check(vacmod.ModuleConfig(A, 0, lvl, G), M)), **p)
            if novikov.is_commutative_associative(A):
                p = {"algebra": A.name, "M": M}
                out += _tag(_guarded(suite, "sl2-derivations", p, lambda: liealg.sl2_derivations(A, M)), **p)
        elif suite == "phicoord":
            out += _phicoord_suite(spec)
    return out


def _phicoord_suite(spec: SpecFile) -> list:
    A, M, G, Z = spec.algebra, spec.mode_window, spec.degree_cap, spec.z_order
    suite = "phicoord"
    out: list = []
    for e in spec.eps:
        p = {"algebra": A.name, "eps": e}
        out += _tag(_guarded(suite, "faithfulness", p, lambda: phicoord.faithfulness_lemma_check(A, e, M)), **p)
        for lvl in spec.levels:
            p = {"algebra": A.name, "eps": e, "level": lvl}
            holder = {}

            def commutator(e=e, lvl=lvl):
                holder["com"] = phicoord.check_commutator_formula(A, e, lvl, M)
                return holder["com"]

            out += _tag(_guarded(suite, "commutator-formula", p, commutator), **p)
            if e not in (0, 1, 2):
                continue
            try:
                mod = phicoord.PhiModule(A, e, lvl, G)
            except (DomainError, StructuralError) as exc:
                rep = Report(suite, "phi-module", dict(p))
                rep.record(False, {"error": type(exc).__name__, "witness": getattr(exc, "witness", None)})
                rep.note = str(exc)
                out.append(rep)
                continue
            vectors = [vacmod.PBWVector.vacuum(), phicoord.depth_two_vector(mod)]
            out += _tag(_guarded(suite, "ye-product", p,
                                 lambda: phicoord.check_ye_homomorphism(mod, vectors[0])), **p)
            for a in range(A.dim):
                for b in range(A.dim):
                    for w in vectors:
                        out += _tag(_guarded(suite, "phi-module-axiom", p,
                                             lambda: phicoord.check_phi_module_axiom(mod, a, b, w, Z)), **p)
            last = A.dim - 1
            for w in vectors:
                out += _tag(_guarded(suite, "jacobi-type", p,
                                     lambda: phicoord.jacobi_type_check(mod, 0, last, w, order=min(Z, 4),
                                                                        window=M + 1,
                                                                        commutator=holder.get("com"))), **p)
        if e == 0:
            for lvl in spec.levels:
                p = {"algebra": A.name, "level": lvl}
                out += _tag(_guarded(suite, "eps0-degeneration", p,
                                     lambda: phicoord.degeneration_check(A, lvl, min(G, 8))), **p)
    return out


def exit_status(reports) -> int:
    """0 when every report passes or is an expected negative, 1 on any failure, 3 if only inconclusive."""
    verdicts = {r.verdict for r in reports}
    if Verdict.FAIL in verdicts:
        return 1
    if Verdict.INCONCLUSIVE in verdicts:
        return 3
    return 0


def render_text(reports) -> str:
    lines = []
    for r in reports:
        lines.append(r.line())
        if r.verdict in (Verdict.FAIL, Verdict.INCONCLUSIVE):
            for w in r.witnesses[:3]:
                lines.append(f"    witness: {jsonable(w)}")
            if r.window:
                lines.append(f"    window: {r.window}")
    counts = {v: sum(r.verdict is v for r in reports) for v in Verdict}
    lines.append(f"{len(reports)} reports: " + ", ".join(f"{n} {v.value.lower()}" for v, n in counts.items()))
    return "\n".join(lines)


def render_json(reports, spec: SpecFile, timing=True) -> str:
    doc = {
        "spec": spec.path,
        "algebra": spec.algebra.name,
        "records": [r.to_record(timing=timing) for r in reports],
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Run exact verification suites on an algebra spec file.")
    ap.add_argument("spec", help="path to a .spec file, or the name of a bundled one (e.g. frobenius1d)")
    ap.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable; default: file's list)")
    ap.add_argument("--eps", help="comma-separated eps values, e.g. 0,1,2")
    ap.add_argument("--level", help="comma-separated levels, e.g. 1,1/2")
    ap.add_argument("--order", type=int, help="series truncation order N")
    ap.add_argument("--degree-cap", type=int, help="degree cap G for vacuum-module computations")
    ap.add_argument("--mode-window", type=int, help="mode window M")
    ap.add_argument("--z-order", type=int, help="z-order for the phi-module axiom")
    ap.add_argument("--report", choices=("text", "json"), default="text")
    ap.add_argument("--no-timing", action="store_true", help="omit timing fields from json output")
    return ap


def _split(text, conv, flag):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if conv is Fraction and not _RATIONAL.match(tok):
            raise SpecSyntaxError(f"{flag}: {tok!r} is not an exact rational literal")
        if conv is int and not re.match(r"[+-]?\d+\Z", tok):
            raise SpecSyntaxError(f"{flag}: {tok!r} is not an integer")
        out.append(conv(tok))
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_spec(args.spec)
        if args.eps:
            spec.eps = _split(args.eps, int, "--eps")
        if args.level:
            spec.levels = _split(args.level, Fraction, "--level")
        for key in ("order", "degree_cap", "mode_window", "z_order"):
            if getattr(args, key) is not None:
                setattr(spec, key, getattr(args, key))
    except SpecSyntaxError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    try:
        reports = run_suites(spec, args.suite)
    except PhiVertexError as exc:  # pragma: no cover - every check is guarded
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.report == "json":
        print(render_json(reports, spec, timing=not args.no_timing))
    else:
        print(render_text(reports))
    return exit_status(reports)


if __name__ == "__main__":
    sys.exit(main())
