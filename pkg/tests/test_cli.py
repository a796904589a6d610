import json
import subprocess
import sys
from fractions import Fraction

import pytest

from phivertex.cli import exit_status, main, parse_spec, parse_spec_text
from phivertex.errors import SpecSyntaxError
from phivertex.novikov import is_left_novikov

QUICK = ["--suite", "associate", "--suite", "novikov", "--suite", "lie"]


@pytest.mark.parametrize("name", ["frobenius1d", "noncomm2d", "dual2d", "broken2d"])
def test_bundled_specs_parse(name):
    spec = parse_spec(name)
    assert spec.algebra.name == name
    assert bool(is_left_novikov(spec.algebra)) == (name != "broken2d")


def test_settings_are_read():
    spec = parse_spec_text(
        "algebra t\nbasis a b\na a = a\na b = 1/2 b - a\n<a, a> = -3/4\n"
        "eps 0 2\nlevel 1 1/2\norder 5\ndegree-cap 7\nmode-window 3\nz-order 4\nsuites lie novikov\n"
    )
    assert spec.eps == [0, 2]
    assert spec.levels == [1, Fraction(1, 2)]
    assert (spec.order, spec.degree_cap, spec.mode_window, spec.z_order) == (5, 7, 3, 4)
    assert spec.suites == ["lie", "novikov"]
    A = spec.algebra
    assert tuple(A.mul(A.unit_vector(0), A.unit_vector(1))) == (-1, Fraction(1, 2))
    assert A.pair(A.unit_vector(0), A.unit_vector(0)) == Fraction(-3, 4)


def _error(text):
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec_text(text, "x.spec")
    return str(info.value)


def test_decimal_literal_is_rejected_with_position():
    msg = _error("algebra t\nbasis e\ne e = 0.1 e\n")
    assert msg.startswith("x.spec:3:")
    assert "0.1" in msg


def test_structural_errors():
    assert "x.spec:4" in _error("algebra t\nbasis a b\n<a, b> = 1\n<b, a> = 2\n")
    assert "x.spec:3" in _error("algebra t\nbasis a\na c = a\n")
    assert "x.spec:4" in _error("algebra t\nbasis a\na a = a\na a = a\n")
    assert "x.spec:3" in _error("algebra t\nbasis a\na a = 1/0 a\n")


def test_exit_code_for_syntax_error(tmp_path, capsys):
    p = tmp_path / "bad.spec"
    p.write_text("algebra t\nbasis e\ne e = 0.1 e\n")
    assert main([str(p)]) == 2
    assert "bad.spec:3" in capsys.readouterr().err


def test_good_and_broken_exit_codes(capsys):
    assert main(["frobenius1d", "--eps", "0,1", *QUICK]) == 0
    assert main(["broken2d"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "witness" in out


def test_json_is_deterministic(capsys):
    args = ["dual2d", "--eps", "1", "--suite", "lie", "--report", "json", "--no-timing"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["algebra"] == "dual2d"
    assert all(r["verdict"] == "PASS" for r in doc["records"])


def test_exit_status_ranking():
    class R:
        def __init__(self, v):
            from phivertex.report import Verdict
            self.verdict = Verdict[v]

    assert exit_status([R("PASS"), R("EXPECTED_NEGATIVE")]) == 0
    assert exit_status([R("PASS"), R("INCONCLUSIVE")]) == 3
    assert exit_status([R("INCONCLUSIVE"), R("FAIL")]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phivertex", "frobenius1d", "--eps", "0", "--suite", "associate"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
