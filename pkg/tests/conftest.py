import sys
from collections import OrderedDict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = OrderedDict(
    [
        (1, "differential example: order 2, bound 2"),
        (2, "random differential family: minimal order n(d-1)"),
        (3, "shift example: T = prod(Dx^rho - k) up to a left factor"),
        (4, "Bessel family: bound 2(k+2), order 2k+1"),
        (5, "1/Gamma(ax+by): order <= b, (Dx - 1, 1) for (1,1)"),
        (6, "properness classification and left borders"),
        (7, "identity suites, 500 cases each"),
        (8, "GFF against exhaustive divisor search"),
    ]
)

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(n, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            continue
        status = "PASS" if all(results) else "FAIL"
        detail = f"{sum(results)}/{len(results)} tests"
        terminalreporter.write_line(f"criterion {n}: {status}  {text} ({detail})")
