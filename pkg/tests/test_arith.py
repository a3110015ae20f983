import math

import numpy as np
import pytest

from tau3var.arith import (
    MAX_SIEVE_N,
    RationalPhase,
    divisors,
    euler_phi,
    mobius,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
    sieve,
    tau_k_pointwise,
)
from tau3var.errors import CapacityError


# expected values frozen from the ordered-triple enumeration below
TAU3_FIRST_TEN = [1, 3, 3, 6, 3, 9, 3, 10, 6, 9]


def tau3_by_enumeration(n):
    return sum(
        1
        for d1 in range(1, n + 1)
        if n % d1 == 0
        for d2 in range(1, n + 1)
        if (n // d1) % d2 == 0
    )


def test_tau3_first_ten():
    table = sieve("tau3", 10)
    assert list(table.values[1:]) == TAU3_FIRST_TEN
    assert TAU3_FIRST_TEN == [tau3_by_enumeration(n) for n in range(1, 11)]


def test_tau3_single_value():
    assert list(sieve("tau3", 1).values[1:]) == [1]


def test_tau3_squared_first_four():
    assert list(sieve("tau3_squared", 4).values[1:]) == [1, 9, 9, 36]


def test_values_at_one_and_primes():
    n = 200
    tables = {k: sieve(k, n) for k in ("tau3", "tau2", "tau3_squared", "phi", "mu")}
    for k in tables:
        assert tables[k][1] == 1
    for p in (2, 3, 5, 7, 11, 97, 199):
        assert tables["tau3"][p] == 3
        assert tables["tau2"][p] == 2
        assert tables["phi"][p] == p - 1
        assert tables["mu"][p] == -1


def test_multiplicativity_spot_check():
    n = 30_000
    table = sieve("tau3", n)
    rng = np.random.default_rng(5)
    count = 0
    while count < 1000:
        a = int(rng.integers(2, 400))
        b = int(rng.integers(2, 400))
        if math.gcd(a, b) == 1 and a * b <= n:
            assert table[a * b] == table[a] * table[b]
            count += 1


def test_sieve_vs_pointwise():
    n = 100_000
    table = sieve("tau3", n)
    rng = np.random.default_rng(17)
    for m in rng.integers(1, n + 1, size=500):
        assert table[int(m)] == tau_k_pointwise(3, int(m))


def test_tau_k_pointwise_examples():
    assert tau_k_pointwise(3, 8) == 10  # = C(3+2, 2) at p^3
    assert tau_k_pointwise(2, 12) == 6
    for p in (2, 3, 5, 7, 11, 101):
        assert tau_k_pointwise(3, p) == 3


def test_sieve_capacity_error_names_n_max():
    with pytest.raises(CapacityError, match=str(MAX_SIEVE_N + 1)):
        sieve("tau3", MAX_SIEVE_N + 1)


def test_sieve_rejects_unknown_kind():
    with pytest.raises(ValueError):
        sieve("tau4", 10)


def test_phi_mu_tables_match_pointwise():
    n = 2000
    phi = sieve("phi", n)
    mu = sieve("mu", n)
    for m in range(1, n + 1, 37):
        assert phi[m] == euler_phi(m)
        assert mu[m] == mobius(m)


def test_ramanujan_examples():
    assert all(ramanujan_sum(1, k) == 1 for k in range(-3, 10))
    for q in (2, 3, 5, 12):
        assert ramanujan_sum(q, q) == euler_phi(q)
        assert ramanujan_sum(q, 0) == euler_phi(q)
    assert ramanujan_sum(4, 2) == -2
    assert ramanujan_sum(6, 1) == 1
    assert ramanujan_sum(9, 3) == -3
    assert ramanujan_sum(5, 5) == 4


def test_ramanujan_vs_bruteforce_exact():
    for q in range(1, 201):
        for k in range(0, 201):
            assert ramanujan_sum(q, k) == ramanujan_sum_bruteforce(q, k)


def test_ramanujan_orthogonality():
    for q in range(2, 201):
        assert sum(ramanujan_sum(q, k) for k in range(1, q + 1)) == 0
    assert sum(ramanujan_sum(1, k) for k in range(1, 2)) == 1


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(49) == [1, 7, 49]


def test_rational_phase_normalisation():
    p = RationalPhase(6, 4)
    assert (p.a, p.q) == (1, 2)
    assert RationalPhase(5, 5).q == 1
    assert RationalPhase(-1, 3).a == 2
    with pytest.raises(ValueError):
        RationalPhase(1, 0)
