"""Shared fixtures and the per-criterion PASS/FAIL summary for the acceptance module."""

from collections import OrderedDict

import numpy as np
import pytest

from hyperioso import BooleanFunction, FamilySpec, generate, tribes

_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    num, title = marks
    entry = _CRITERIA.setdefault(num, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or report.outcome != "passed":
        entry["ran"] += report.when == "call"
        if report.outcome == "failed":
            entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entry = _CRITERIA[num]
        status = "FAIL" if entry["failed"] or not entry["ran"] else "PASS"
        line = f"{status} criterion {num}: {entry['title']}"
        if entry["failed"]:
            line += f"  (failed: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)


@pytest.fixture
def maj3():
    return generate(FamilySpec("majority"), 3)


@pytest.fixture
def dictator():
    return BooleanFunction(1, np.array([0, 1], dtype=np.uint8))


@pytest.fixture
def and2():
    return BooleanFunction(2, np.array([0, 0, 0, 1], dtype=np.uint8))


@pytest.fixture
def parity2():
    return generate(FamilySpec("parity"), 2)


@pytest.fixture
def tribes22():
    return tribes(2, 2)

