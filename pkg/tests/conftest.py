import pytest

from ramamoments.arith import build_sieves

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def tables():
    return build_sieves(100_000)


@pytest.fixture(scope="session")
def big_tables():
    return build_sieves(2_000_000)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
