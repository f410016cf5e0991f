import pytest

from hermitian_ep.config import load_config


@pytest.fixture(scope="session")
def fig2():
    return load_config(preset="fig2")


@pytest.fixture(scope="session")
def fig7():
    return load_config(preset="fig7")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
