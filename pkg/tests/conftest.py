import pytest
from hypothesis import settings

from asai.datasets import load_bc11
from asai.hecke import base_change
from asai.numfield import ImagQuadField, primes_upto

settings.register_profile("asai", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("asai")

FUNDAMENTAL_D = [3, 4, 7, 8, 11, 15, 19, 20, 23, 24]


@pytest.fixture(scope="session")
def bc11():
    return load_bc11()


@pytest.fixture(scope="session")
def bc11_qi(bc11):
    return base_change(bc11, ImagQuadField(4), primes=primes_upto(600))


@pytest.fixture(scope="session")
def bc11_q3(bc11):
    return base_change(bc11, ImagQuadField(3), primes=primes_upto(600))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
