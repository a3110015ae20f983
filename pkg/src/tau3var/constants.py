"""High-precision scalar constants.

Covers Euler's constant, the 0-th generalized Stieltjes constants
gamma_0(alpha) (the constant term of the Hurwitz zeta Laurent expansion,
equal to -psi(alpha)), zeta at real points s > 1 by Euler-Maclaurin, and the
Euler product

    A3 = prod_p (1 - 9 p^-2 + 16 p^-3 - 9 p^-4 + p^-6)

whose value divided by 8! is the leading constant of the summatory function
of tau3(n)^2.  Everything is double precision with explicitly tracked tail
bounds; the tolerances in play (1e-6 .. 1e-12) never need more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import _primes_upto

#: Euler-Mascheroni constant, nearest binary64.
EULER_GAMMA = 0.5772156649015329

#: First Stieltjes constant gamma_1 (= gamma_1(1)), nearest binary64.
STIELTJES_GAMMA1 = -0.07281584548367672

#: Odd harmonic numbers H_1, H_3, H_5, ... H_13 for the gamma_1 asymptotics.
_H_ODD = (
    1.0,
    11.0 / 6.0,
    137.0 / 60.0,
    363.0 / 140.0,
    7129.0 / 2520.0,
    83711.0 / 27720.0,
    1145993.0 / 360360.0,
)

# B_{2n}/(2n) for the digamma asymptotic series, n = 1..7.  With the
# argument shifted to >= 10 the truncation error is below 1e-15.
_PSI_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# Bernoulli numbers B_2, B_4, ... for Euler-Maclaurin zeta.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)


def euler_gamma() -> float:
    """Euler's constant, correct to full double precision."""
    return EULER_GAMMA


def digamma(x):
    """psi(x) for positive scalar or array x.

    Recurrence-shifts the argument up by 10 and applies the asymptotic
    series psi(y) = log y - 1/(2y) - sum B_{2n}/(2n y^{2n}).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("digamma requires positive arguments")
    shift = sum(1.0 / (arr + j) for j in range(10))
    y = arr + 10.0
    z = 1.0 / (y * y)
    tail = 0.0
    for c in reversed(_PSI_SERIES):
        tail = (tail + c) * z
    out = np.log(y) - 0.5 / y - tail - shift
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def stieltjes0(alpha) -> float:
    """gamma_0(alpha) = -psi(alpha) for rational or float alpha in (0, 1]."""
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    return -digamma(a)


def stieltjes0_limit(alpha, m: int = 10**6, richardson: bool = True) -> float:
    """Raw-limit oracle: sum_{k<=m} 1/(k+alpha) - log(m+alpha).

    The plain estimate converges like 1/(2m); the Richardson combination
    2*est(2m) - est(m) kills that term and is accurate to O(1/m^2).  Kept
    only as an independent check on the digamma route.
    """
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")

    def estimate(mm: int) -> float:
        ks = np.arange(mm + 1, dtype=float)
        return float(np.sum(1.0 / (ks + a))) - math.log(mm + a)

    if not richardson:
        return estimate(m)
    return 2.0 * estimate(2 * m) - estimate(m)


def stieltjes1(x):
    """gamma_1(x): the (s-1)^1 Laurent coefficient (negated) of the Hurwitz
    zeta zeta(s, x) at s = 1, for scalar or array x in (0, 1].

    gamma_1(x) = lim_m [ sum_{k<=m} log(k+x)/(k+x) - log^2(m+x)/2 ].

    Euler-Maclaurin with the argument shifted by 12:

        gamma_1(x) = sum_{k<M} f(k) - log^2 u / 2 + f(M)/2
                     + sum_j B_2j/(2j) (log u - H_{2j-1}) / u^2j,

    with f(t) = log(t+x)/(t+x), u = M + x, using
    f^{(n)}(t) = (-1)^n n! (log(t+x) - H_n)/(t+x)^{n+1}.

    Needed because the triple pole of the twisted tau3 generating function
    carries gamma_1(alpha/q) in its (s-1)^-1 coefficient; dropping it shifts
    every constant-order main term by O(1).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise ValueError("stieltjes1 expects arguments in (0, 1]")
    m_shift = 12
    head = sum(np.log(arr + k) / (arr + k) for k in range(m_shift))
    u = arr + m_shift
    logu = np.log(u)
    acc = head - 0.5 * logu * logu + 0.5 * logu / u
    upow = u * u
    for j, (b, h) in enumerate(zip(_BERNOULLI[:7], _H_ODD), start=1):
        acc += b / (2 * j) * (logu - h) / upow
        upow *= u * u
    return float(acc) if np.isscalar(x) or arr.ndim == 0 else acc


def stieltjes1_limit(alpha, m: int = 10**6, richardson: bool = True) -> float:
    """Raw-limit oracle for gamma_1; Richardson kills the O(log m / m) term.

    est(m) = sum_{k<=m} log(k+a)/(k+a) - log^2(m+a)/2 approaches gamma_1(a)
    with leading error c(a) * log(m)/m; the three-point combination below
    eliminates both the log m/m and 1/m terms.
    """
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")

    def estimate(mm: int) -> float:
        ks = np.arange(mm + 1, dtype=float) + a
        return float(np.sum(np.log(ks) / ks)) - 0.5 * math.log(mm + a) ** 2

    if not richardson:
        return estimate(m)
    # error model e(m) = (p log m + q)/m; the combination below annihilates
    # both components using the points m, 2m, 4m
    e1, e2, e4 = estimate(m), estimate(2 * m), estimate(4 * m)
    return e1 - 4.0 * e2 + 4.0 * e4


@dataclass(frozen=True)
class StieltjesValue:
    alpha: Fraction
    value: float


def stieltjes_value(alpha) -> StieltjesValue:
    frac = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    return StieltjesValue(alpha=frac, value=stieltjes0(frac))


def zeta(s: float, cutoff: int = 24) -> float:
    """zeta(s) for real s > 1 by Euler-Maclaurin with remainder pushed below 1e-15."""
    if s <= 1.0:
        raise ValueError(f"zeta implemented for real s > 1 only, got {s}")
    m = float(cutoff)
    total = math.fsum(n ** (-s) for n in range(1, cutoff))
    total += m ** (1.0 - s) / (s - 1.0) + 0.5 * m ** (-s)
    rising = s
    power = m ** (-s - 1.0)
    fact = 1.0
    for idx, b in enumerate(_BERNOULLI, start=1):
        fact *= (2 * idx - 1) * (2 * idx)
        total += b / fact * rising * power
        rising *= (s + 2 * idx - 1) * (s + 2 * idx)
        power /= m * m
    return total


def f_coefficient(nu: int) -> int:
    """Coefficient a_nu of the Euler factor of zeta^-9 * sum tau3(n)^2 n^-s.

    a_nu = sum_r (-1)^r C(9, r) C(nu - r + 2, 2)^2, an alternating sum that
    vanishes for nu = 5 and all nu >= 7.
    """
    if nu < 0:
        raise ValueError(f"nu must be >= 0, got {nu}")
    total = 0
    for r in range(0, min(nu, 9) + 1):
        total += (-1) ** r * math.comb(9, r) * math.comb(nu - r + 2, 2) ** 2
    return total


# Local factor exponents actually present: nu = 2, 3, 4, 6.
_A2, _A3_, _A4, _A6 = (f_coefficient(v) for v in (2, 3, 4, 6))


@dataclass(frozen=True)
class EulerProductResult:
    value: float
    truncation_prime: int
    tail_bound: float


def _euler_product(s: float, truncation_prime: int) -> EulerProductResult:
    primes = _primes_upto(truncation_prime).astype(float)
    x2 = primes ** (-2.0 * s)
    x1 = primes ** (-s)
    local = _A2 * x2 + _A3_ * x2 * x1 + _A4 * x2 * x2 + _A6 * x2 * x2 * x2
    log_value = float(np.sum(np.log1p(local)))
    value = math.exp(log_value)
    # Integral-test tail: sum_{n>P} n^-m <= P^(1-m)/(m-1) dominates the
    # omitted prime sums coefficient by coefficient.
    p = float(truncation_prime)

    def tail_int(m: float) -> float:
        return p ** (1.0 - m) / (m - 1.0)

    log_tail = (
        abs(_A2) * tail_int(2 * s)
        + abs(_A3_) * tail_int(3 * s)
        + abs(_A4) * tail_int(4 * s)
        + abs(_A6) * tail_int(6 * s)
    )
    return EulerProductResult(
        value=value,
        truncation_prime=truncation_prime,
        tail_bound=abs(value) * math.expm1(log_tail),
    )


def dirichlet_F(s: float, truncation_prime: int = 10**5) -> float:
    """F(s) = prod_p (1 + a2 p^-2s + a3 p^-3s + a4 p^-4s + a6 p^-6s), s > 1/2."""
    if s <= 0.5:
        raise ValueError(f"dirichlet_F needs s > 0.5, got {s}")
    return _euler_product(s, truncation_prime).value


def euler_product_A3(truncation_prime: int) -> EulerProductResult:
    """A3 = F(1) with a rigorous bound on the omitted factors."""
    if truncation_prime < 100:
        raise ValueError(f"truncation_prime must be >= 100, got {truncation_prime}")
    return _euler_product(1.0, truncation_prime)


def s8_constant(truncation_prime: int = 10**6) -> EulerProductResult:
    """Leading constant A3/8! of the degree-8 variance asymptotic."""
    res = euler_product_A3(truncation_prime)
    scale = math.factorial(8)
    return EulerProductResult(
        value=res.value / scale,
        truncation_prime=res.truncation_prime,
        tail_bound=res.tail_bound / scale,
    )


def tau3_squared_dirichlet_tail(s: float, n_cutoff: int) -> float:
    """Rigorous bound on sum_{n > X} tau3(n)^2 n^-s via Rankin's trick.

    For any 0 < delta < s - 1 the tail is at most
    X^-delta * zeta(s - delta)^9 * F(s - delta); the bound is minimised over
    a fixed delta grid (deterministic).
    """
    if s <= 1.0:
        raise ValueError("tail bound requires s > 1")
    best = math.inf
    for delta in np.linspace(0.05, s - 1.02, 60):
        if delta <= 0:
            continue
        sd = s - delta
        f = _euler_product(sd, 10**5)
        bound = n_cutoff ** (-delta) * zeta(sd) ** 9 * (f.value + f.tail_bound)
        best = min(best, bound)
    return best
