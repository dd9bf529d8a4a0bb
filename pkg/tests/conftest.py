import pytest

from chamberwalks import hecke, weyl


@pytest.fixture(scope="session")
def field2():
    return hecke.ScalarField(2)


@pytest.fixture(scope="session")
def field3():
    return hecke.ScalarField(3)


@pytest.fixture(scope="session")
def ball8():
    return weyl.ball(8)


@pytest.fixture(scope="session")
def ball6():
    return weyl.ball(6)


@pytest.fixture(scope="session")
def ball4():
    return weyl.ball(4)
