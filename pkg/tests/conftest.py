import os

import pytest

_DETAILS = {}
_OUTCOMES = {}


@pytest.fixture
def report(request):
    """Attach a measured-value note to the current acceptance criterion."""
    def note(text):
        _DETAILS[request.node.nodeid] = text
    return note


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_OUTCOMES):
        name = nodeid.split("::")[-1]
        status = "PASS" if _OUTCOMES[nodeid] == "passed" else "FAIL"
        detail = _DETAILS.get(nodeid, "")
        terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())


def worker_count():
    return max(1, min(4, os.cpu_count() or 1))
