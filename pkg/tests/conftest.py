"""Shared fixtures and the per-criterion acceptance summary."""
from __future__ import annotations

from collections import OrderedDict

import pytest
from hypothesis import settings

settings.register_profile("desk", max_examples=40, deadline=None)
settings.load_profile("desk")

_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            n, title = mark.args
            entry = _CRITERIA.setdefault(n, {"title": title, "outcomes": []})
            entry["title"] = title


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n, entry in _CRITERIA.items():
        if report.nodeid in entry.setdefault("ids", set()):
            entry["outcomes"].append(report.outcome)


def pytest_itemcollected(item):
    mark = item.get_closest_marker("criterion")
    if mark:
        n, title = mark.args
        _CRITERIA.setdefault(n, {"title": title, "outcomes": []}).setdefault("ids", set()).add(item.nodeid)


def pytest_terminal_summary(terminalreporter):
    ran = {n: e for n, e in _CRITERIA.items() if e["outcomes"]}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ran):
        e = ran[n]
        verdict = "PASS" if all(o == "passed" for o in e["outcomes"]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {e['title']}")


@pytest.fixture(scope="session")
def catalog():
    from phivertex import catalog as c
    return {"frobenius1d": c.frobenius1d(), "noncomm2d": c.noncomm2d(), "dual2d": c.dual2d(),
            "broken2d": c.broken2d(), "gelfand-euler": c.gelfand_euler(), "gelfand-x2": c.gelfand_x2()}
