import pytest

_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects the one-line verdicts printed at the end of the run."""
    return _LINES


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
