import pytest

from ubnob.linalg import RngStream, random_density

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return RngStream(12345)


@pytest.fixture
def make_state():
    def _make(p, seed):
        return random_density(p, RngStream(seed))

    return _make


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
