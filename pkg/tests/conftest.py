import sys

import pytest

from moledrill.quantities import load_config, load_records


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="session")
def records():
    return load_records()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
