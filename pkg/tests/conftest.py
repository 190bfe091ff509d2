import pytest

from opct import generators as gen
from opct.textio import load_fixture


@pytest.fixture(scope="session")
def f1():
    return load_fixture("f1")


@pytest.fixture(scope="session")
def f3():
    return load_fixture("f3")


@pytest.fixture(scope="session")
def f5():
    return load_fixture("f5")


@pytest.fixture(scope="session")
def f6():
    return load_fixture("f6")


@pytest.fixture(scope="session")
def arc():
    return gen.gen_arc(6)


@pytest.fixture(scope="session")
def tree():
    return gen.gen_tree(2, 6)



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
