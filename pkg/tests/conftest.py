import pytest

from clpoisson import builtin, lie_poisson
from clpoisson.sl3family import family


@pytest.fixture(scope="session")
def so3():
    return builtin("so3")


@pytest.fixture(scope="session")
def sl2():
    return builtin("sl2")


@pytest.fixture(scope="session")
def sl3():
    return builtin("sl3")


@pytest.fixture(scope="session")
def gl3():
    return builtin("gl3")


@pytest.fixture(scope="session")
def fam():
    return family()


@pytest.fixture(scope="session")
def P_sl3(sl3):
    return lie_poisson(sl3)


@pytest.fixture(scope="session")
def P_so3(so3):
    return lie_poisson(so3)
