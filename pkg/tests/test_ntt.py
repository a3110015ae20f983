import numpy as np
import pytest

from tau3var import ntt
from tau3var.errors import CapacityError, InternalConsistencyError


def miller_rabin(n: int) -> bool:
    # deterministic for n < 3.3e24 with these witnesses
    if n < 2:
        return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_moduli_are_prime_and_large():
    for p in (ntt.P1, ntt.P2):
        assert miller_rabin(p)
        assert p >= 1 << 62


def test_two_adicity_and_generators():
    for p, g, v in ((ntt.P1, ntt.G1, 32), (ntt.P2, ntt.G2, 33)):
        assert (p - 1) % (1 << v) == 0
        # g generates the full multiplicative group: g^((p-1)/r) != 1 for
        # every prime r | p-1
        rest = p - 1
        factors = set()
        d = 2
        while d * d <= rest:
            if rest % d == 0:
                factors.add(d)
                while rest % d == 0:
                    rest //= d
            d += 1
        if rest > 1:
            factors.add(rest)
        for r in factors:
            assert pow(g, (p - 1) // r, p) != 1


def naive_autocorrelation(vals):
    n = len(vals)
    return [sum(vals[i] * vals[i + k] for i in range(n - k)) for k in range(n)]


def test_autocorrelation_matches_naive():
    rng = np.random.default_rng(23)
    for size in (1, 2, 3, 7, 16, 33, 100, 257):
        vals = [int(v) for v in rng.integers(0, 10**6, size=size)]
        bound = sum(v * v for v in vals)
        got = ntt.autocorrelation(vals, value_bound=max(bound, 1))
        assert got == naive_autocorrelation(vals)


def test_autocorrelation_large_values():
    # zero-shift sum just below the 2^63 reconstruction guarantee
    vals = [2**30 - 3] * 4
    bound = sum(v * v for v in vals)
    assert bound < 1 << 63
    got = ntt.autocorrelation(vals, value_bound=bound)
    assert got == naive_autocorrelation(vals)


def test_bound_violation_is_hard_error():
    vals = [10, 10, 10]
    with pytest.raises(InternalConsistencyError):
        ntt.autocorrelation(vals, value_bound=100)  # true V(0) = 300


def test_bound_above_guarantee_rejected():
    with pytest.raises(CapacityError):
        ntt.autocorrelation([1, 2], value_bound=1 << 63)
