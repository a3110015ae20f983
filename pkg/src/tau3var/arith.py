"""Exact sieves for multiplicative functions and Ramanujan sums.

Tables are int64 numpy arrays indexed by n (index 0 unused).  tau3(n), the
number of ordered triples (d1,d2,d3) with d1*d2*d3 = n, is built by two
cascaded divisor-sum passes (tau = 1*1 first, then tau3 = tau*1), so the hot
path needs no factorisation machinery at all.  Every value is an exact
integer; the only squaring step (tau3^2) is guarded against int64 overflow.

The Ramanujan sum c_q(k) = sum over a coprime to q of exp(2*pi*i*a*k/q)
evaluates through the classical closed form

    c_q(k) = mu(q/g) * phi(q) / phi(q/g),   g = gcd(q, |k|),

with the literal complex-exponential sum kept alongside as a brute-force
oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, InternalConsistencyError

SIEVE_KINDS = ("tau3", "tau2", "tau3_squared", "phi", "mu")

# int64 tables above this would not fit comfortably in memory alongside the
# transform buffers; requests beyond it get a sizing error, never a crash.
MAX_SIEVE_N = 1 << 27

# values whose square still fits in int64
_SQUARE_SAFE = 3_037_000_499


@dataclass(frozen=True)
class DivisorTable:
    """Values of one multiplicative function on 1..n_max, integer exact.

    values has length n_max + 1 with values[0] = 0 unused, so values[n] is
    the function at n.  mu stores -1/0/+1.
    """

    kind: str
    n_max: int
    values: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.values[n])


def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.nonzero(sieve)[0]


def _divisor_count_table(n_max: int) -> np.ndarray:
    # tau = 1*1.  Divisors d > n/2 divide only d itself, so that half of the
    # loop collapses to a single vector add.
    t = np.zeros(n_max + 1, dtype=np.int64)
    half = n_max // 2
    for d in range(1, half + 1):
        t[d::d] += 1
    t[half + 1 :] += 1
    return t


def _tau3_table(n_max: int) -> np.ndarray:
    t2 = _divisor_count_table(n_max)
    t3 = np.zeros(n_max + 1, dtype=np.int64)
    half = n_max // 2
    for d in range(1, half + 1):
        t3[d::d] += t2[d]
    t3[half + 1 :] += t2[half + 1 :]
    return t3


def _phi_table(n_max: int) -> np.ndarray:
    phi = np.arange(n_max + 1, dtype=np.int64)
    for p in _primes_upto(n_max):
        phi[p::p] -= phi[p::p] // p
    return phi


def _mu_table(n_max: int) -> np.ndarray:
    mu = np.ones(n_max + 1, dtype=np.int64)
    for p in _primes_upto(n_max):
        mu[p::p] *= -1
        pp = p * p
        if pp <= n_max:
            mu[pp::pp] = 0
    if n_max >= 0:
        mu[0] = 0
    return mu


def sieve(kind: str, n_max: int) -> DivisorTable:
    """Build the exact table of one multiplicative function on 1..n_max."""
    if kind not in SIEVE_KINDS:
        raise ValueError(f"unknown sieve kind {kind!r}; expected one of {SIEVE_KINDS}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if n_max > MAX_SIEVE_N:
        raise CapacityError(
            f"n_max={n_max} exceeds the sieve capacity {MAX_SIEVE_N}"
        )
    if kind == "tau2":
        values = _divisor_count_table(n_max)
    elif kind == "tau3":
        values = _tau3_table(n_max)
    elif kind == "tau3_squared":
        t3 = _tau3_table(n_max)
        peak = int(t3.max())
        if peak > _SQUARE_SAFE:
            raise OverflowError(
                f"tau3 peak {peak} would overflow int64 when squared"
            )
        values = t3 * t3
    elif kind == "phi":
        values = _phi_table(n_max)
    else:
        values = _mu_table(n_max)
    return DivisorTable(kind=kind, n_max=n_max, values=values)


def divisors(n: int) -> list[int]:
    """Sorted divisors of n by sqrt enumeration."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation by trial division, as (p, exponent) pairs."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                e += 1
                n //= d
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def mobius(n: int) -> int:
    if n == 1:
        return 1
    sign = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        sign = -sign
    return sign


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


def tau_k_pointwise(k: int, n: int) -> int:
    """tau_k(n) by recursive divisor enumeration (oracle for the sieve).

    tau_1 = 1 and tau_k = tau_{k-1} * 1, so tau_k(n) counts ordered k-tuples
    of positive integers with product n.
    """
    if k < 1 or n < 1:
        raise ValueError("tau_k_pointwise needs k >= 1 and n >= 1")
    if k == 1:
        return 1
    return sum(tau_k_pointwise(k - 1, d) for d in divisors(n))


def ramanujan_sum(q: int, k: int) -> int:
    """c_q(k) via mu(q/g) * phi(q) / phi(q/g) with g = gcd(q, |k|).

    k = 0 gives phi(q) (g = q).  Exact integer arithmetic throughout; the
    division is exact because phi(q/g) divides phi(q) whenever (q/g) | q.
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    g = math.gcd(q, abs(k))
    m = q // g
    mu_m = mobius(m)
    if mu_m == 0:
        return 0
    return mu_m * euler_phi(q) // euler_phi(m)


def ramanujan_sum_bruteforce(q: int, k: int) -> int:
    """Literal sum of exp(2*pi*i*a*k/q) over residues a coprime to q.

    Oracle-scale only.  The imaginary part must vanish; anything above the
    tolerance indicates a broken phase table rather than roundoff.
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if q > 10_000:
        raise CapacityError(f"brute-force Ramanujan sum capped at q <= 10000, got {q}")
    z = 0.0 + 0.0j
    for a in range(1, q + 1):
        if math.gcd(a, q) == 1:
            z += cmath.exp(2j * math.pi * ((a * k) % q) / q)
    if abs(z.imag) >= 1e-6:
        raise InternalConsistencyError(
            f"c_{q}({k}) brute force has imaginary residue {z.imag:.3e}"
        )
    return round(z.real)


@dataclass(frozen=True)
class RationalPhase:
    """A reduced fraction a/q with 1 <= a <= q, gcd(a, q) = 1.

    Construction normalises: a is reduced mod q into 1..q and the common
    factor is divided out, so a/q = 1/1 represents integer (zero) phase.
    """

    a: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"denominator must be positive, got {self.q}")
        a = self.a % self.q
        if a == 0:
            a = self.q
        g = math.gcd(a, self.q)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "q", self.q // g)

    @property
    def value(self) -> float:
        return self.a / self.q

    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.q)
