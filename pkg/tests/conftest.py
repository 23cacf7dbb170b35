import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _ACCEPTANCE.append(report)


_ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rep in sorted(_ACCEPTANCE, key=lambda r: r.nodeid):
        name = rep.nodeid.split("::")[-1].removeprefix("test_criterion_")
        detail = "; ".join(str(v) for k, v in rep.user_properties if k == "detail")
        status = "PASS" if rep.passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {detail}")
