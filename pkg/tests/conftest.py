import numpy as np
import pytest

import tlsub as tb


@pytest.fixture(scope="session")
def system2():
    return tb.params_from_polynomial([1, -1])


@pytest.fixture(scope="session")
def system3():
    return tb.params_from_polynomial([1, 1, 1])


@pytest.fixture(scope="session")
def systemq():
    q = 0.5
    return tb.params_from_polynomial([q**-0.5, -(q**0.5)])


@pytest.fixture(scope="session")
def fock2(system2):
    return tb.build_fock(system2, 6)


@pytest.fixture(scope="session")
def fock3(system3):
    return tb.build_fock(system3, 5)


@pytest.fixture(scope="session")
def fockq(systemq):
    return tb.build_fock(systemq, 6)


@pytest.fixture(scope="session")
def tower3(system3):
    return tb.build_tower(system3, 6)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
