"""Exact integer autocorrelation via number-theoretic transforms.

Radix-2 transforms over two fixed word-size primes with large two-adic
valuation, recombined by the Chinese remainder theorem:

    P1 = 2^64 - 2^32 + 1   (generator 7,  2^32 | P1 - 1)
    P2 = 1073741838 * 2^32 + 1 = 4611686078556930049
                           (generator 11, 2^33 | P2 - 1)

Both primes exceed 2^62, so the CRT modulus P1*P2 ~ 8.5e37 leaves enormous
headroom over the a-priori bound on any autocorrelation value.  The caller
supplies that bound (for nonnegative sequences, the zero-shift value); a
reconstructed value above it is a hard error, never a silent wrap.

Python integers carry the arithmetic, so there is no intermediate overflow
to reason about; the transforms are exact by construction and the CRT step
is exact whenever the true value is below the supplied bound.
"""

from __future__ import annotations

from .errors import CapacityError, InternalConsistencyError

P1 = 18446744069414584321
G1 = 7
P2 = 4611686078556930049
G2 = 11

_TWO_ADICITY = {P1: 32, P2: 33}
_INV_P1_MOD_P2 = pow(P1, -1, P2)

#: exact reconstruction is only guaranteed while values stay below 2^63
VALUE_BITS = 63


def _bit_reverse_permute(a: list[int]) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]


def _ntt_inplace(a: list[int], p: int, g: int, invert: bool) -> None:
    n = len(a)
    _bit_reverse_permute(a)
    m = 2
    while m <= n:
        root = pow(g, (p - 1) // m, p)
        if invert:
            root = pow(root, p - 2, p)
        half = m >> 1
        for start in range(0, n, m):
            w = 1
            for idx in range(start, start + half):
                u = a[idx]
                t = w * a[idx + half] % p
                a[idx] = (u + t) % p
                a[idx + half] = (u - t) % p
                w = w * root % p
        m <<= 1
    if invert:
        n_inv = pow(n, p - 2, p)
        for i in range(n):
            a[i] = a[i] * n_inv % p


def _cyclic_convolution_mod(a: list[int], b: list[int], p: int, g: int) -> list[int]:
    fa = [x % p for x in a]
    fb = [x % p for x in b]
    _ntt_inplace(fa, p, g, invert=False)
    _ntt_inplace(fb, p, g, invert=False)
    fa = [x * y % p for x, y in zip(fa, fb)]
    _ntt_inplace(fa, p, G1 if p == P1 else G2, invert=True)
    return fa


def autocorrelation(values: list[int], value_bound: int) -> list[int]:
    """Exact V(k) = sum_n values[n] * values[n+k] for k = 0..len-1.

    value_bound must be a proven upper bound on every V(k); for nonnegative
    input, V(0) works (Cauchy-Schwarz).  Bounds at or above 2^63 are
    rejected up front, and any reconstructed value above the bound raises.
    """
    n = len(values)
    if n < 1:
        raise ValueError("empty sequence")
    if value_bound >= 1 << VALUE_BITS:
        raise CapacityError(
            f"value bound {value_bound} is not below 2^{VALUE_BITS}; "
            "exact reconstruction is not guaranteed"
        )
    length = 1
    while length < 2 * n - 1:
        length <<= 1
    for p in (P1, P2):
        if length > 1 << _TWO_ADICITY[p]:
            raise CapacityError(
                f"transform length {length} exceeds the two-adic capacity of {p}"
            )
    a = list(values) + [0] * (length - n)
    b = list(values)[::-1] + [0] * (length - n)
    conv1 = _cyclic_convolution_mod(a, b, P1, G1)
    conv2 = _cyclic_convolution_mod(a, b, P2, G2)
    out = []
    for k in range(n):
        r1 = conv1[n - 1 + k]
        r2 = conv2[n - 1 + k]
        v = r1 + P1 * ((r2 - r1) * _INV_P1_MOD_P2 % P2)
        if v > value_bound:
            raise InternalConsistencyError(
                f"CRT value {v} at shift {k} exceeds the guaranteed bound "
                f"{value_bound}; refusing to wrap"
            )
        out.append(v)
    return out
