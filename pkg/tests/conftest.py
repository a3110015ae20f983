import pytest

from tau3var.arith import sieve


@pytest.fixture(scope="session")
def tau3_64k():
    return sieve("tau3", 1 << 16)


@pytest.fixture(scope="session")
def tau3_1e6():
    return sieve("tau3", 10**6)


@pytest.fixture(scope="session")
def tau3_1e7():
    return sieve("tau3", 10**7)


@pytest.fixture(scope="session")
def tau2_2e6():
    return sieve("tau2", 2 * 10**6)
