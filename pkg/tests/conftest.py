import random

import pytest
from hypothesis import strategies as st

from clusterbound.cluster import WeightedCluster

from oracles import random_structure

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "tests": []})
    entry["tests"].append(item.name)
    if not report.passed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        mark = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {entry['title']}")


@st.composite
def clusters(draw, max_r=10, max_abs=20):
    r = draw(st.integers(1, max_r))
    seed = draw(st.integers(0, 2**32 - 1))
    prox = random_structure(r, random.Random(seed))
    m = draw(st.lists(st.integers(-max_abs, max_abs), min_size=r, max_size=r))
    return WeightedCluster.build(r, prox, m)
