import math
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def brute_farey(Q):
    """Sorted reduced fractions a/b in [0, 1] with b <= Q, by direct filtering."""
    return sorted({Fraction(a, b) for b in range(1, Q + 1) for a in range(0, b + 1)})


def brute_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@pytest.fixture(scope="session")
def farey500():
    return [x for x in brute_farey(500) if 0 < x < 1]


# ---------------------------------------------------------- acceptance report

_CRITERIA: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    number, title = mark.args
    _CRITERIA.append((number, title, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict in sorted(_CRITERIA):
        terminalreporter.write_line(f"{verdict} criterion {number:>2}: {title}")
