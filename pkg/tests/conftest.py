import sys, os
sys.path.insert(0, os.path.dirname(__file__))
import pytest

from svw import wgen
from svw.brst import Complex


@pytest.fixture(scope="session")
def C1():
    return Complex(1)


@pytest.fixture(scope="session")
def C2():
    return Complex(2)


@pytest.fixture(scope="session")
def M1(C1):
    return C1.minus


@pytest.fixture(scope="session")
def M2(C2):
    return C2.minus


@pytest.fixture(scope="session")
def W1(M1):
    return wgen.extract_W(M1)


@pytest.fixture(scope="session")
def W2(M2):
    return wgen.extract_W(M2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
