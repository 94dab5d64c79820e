import pytest

from psilab.numerics import CircleGrid
from psilab.symbols import CutFunction


@pytest.fixture(scope="session")
def grid16():
    return CircleGrid(J=68, N=16, k=1)


@pytest.fixture(scope="session")
def grid32():
    return CircleGrid(J=132, N=32, k=1)


@pytest.fixture(scope="session")
def grid64():
    return CircleGrid(J=260, N=64, k=1)


@pytest.fixture(scope="session")
def theta():
    return CutFunction(4.0)
