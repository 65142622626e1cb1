import pytest

from pcsf.stdlib import stdlib

# one line per acceptance criterion, filled by test_acceptance and echoed at the end
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lib():
    return stdlib()
