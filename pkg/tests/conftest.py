import pytest

from ifrshift import bundled, load_demographics, load_lethality

_acceptance = []


@pytest.fixture(scope="session")
def china():
    return load_demographics(bundled("china_2021.csv"))


@pytest.fixture(scope="session")
def cuba():
    return load_demographics(bundled("cuba_2021.csv"))


@pytest.fixture(scope="session")
def ifr():
    return load_lethality(bundled("ifr_mexico_unvaccinated.csv"))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance.append((report.nodeid.split("::")[-1], "error"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
