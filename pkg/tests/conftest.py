import pytest

from minflow.words import FullShiftSystem, get_system


@pytest.fixture(scope="session")
def morse():
    return get_system("morse")


@pytest.fixture(scope="session")
def fib():
    return get_system("fibonacci")


@pytest.fixture(scope="session")
def pd():
    return get_system("period-doubling")


@pytest.fixture(scope="session")
def full_shift():
    return FullShiftSystem("01")
