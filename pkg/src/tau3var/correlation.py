"""Shifted correlation sums of tau3 and their spectral identities.

V(k, N) = sum_{n <= N-|k|} tau3(n) tau3(n+|k|) is the autocorrelation of the
truncated sequence tau3(1..N); consequently

    |D(alpha, N)|^2 = sum_{|k| <= N-1} V(k, N) e(alpha k),
    D(alpha, N)     = sum_{n <= N} tau3(n) e(alpha n),

holds exactly, and the analogous Fourier series with S_Delta(k, N) in place
of V equals the Farey-side sum of |F(alpha, a/q, N)|^2 over fractions with
q <= Delta.  Both identities are exercised as dual-route checks.

Exactness policy: V values are exact integers.  The direct method uses
int64 pairwise accumulation (np.correlate); the transform method uses the
two-prime modular transforms with CRT reconstruction, bounded by the
directly computed V(0) = sum tau3^2.  Floating-point spectra never enter
the trusted path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import ntt
from .arith import DivisorTable, RationalPhase, sieve
from .errors import CapacityError, InternalConsistencyError
from .singular import density_weight, s_delta_profile

DIRECT_N_MAX = 1 << 14
TRANSFORM_N_MAX = 1 << 26


@dataclass(frozen=True)
class CorrelationSeries:
    n_max: int
    values: np.ndarray  # int64, index k = 0..n_max-1
    method: str

    def __getitem__(self, k: int) -> int:
        return int(self.values[k])


@dataclass(frozen=True)
class MomentStatistic:
    N: int
    Delta: int
    second_moment: float
    ratio: float  # second_moment / N^(299/100)


def default_delta(n_max: int, exponent: float = 4.0 / 19.0) -> int:
    """floor(N^exponent); exact integer comparisons for the 4/19 default."""
    if exponent == 4.0 / 19.0:
        d = max(1, int(round(n_max ** (4.0 / 19.0))))
        while (d + 1) ** 19 <= n_max**4:
            d += 1
        while d > 1 and d**19 > n_max**4:
            d -= 1
        return d
    return max(1, int(math.floor(n_max**exponent + 1e-12)))


def _tau3_values(n_max: int, table: DivisorTable | None) -> np.ndarray:
    if table is None:
        table = sieve("tau3", n_max)
    if table.kind != "tau3" or table.n_max < n_max:
        raise ValueError("need a tau3 table covering 1..n_max")
    return table.values[1 : n_max + 1]


def correlation_series(
    n_max: int, method: str = "direct", table: DivisorTable | None = None
) -> CorrelationSeries:
    """Exact V(k, N) for k = 0..N-1 by pairwise accumulation or modular transform."""
    if n_max < 2:
        raise ValueError(f"need N >= 2, got {n_max}")
    a = _tau3_values(n_max, table)
    if method == "direct":
        if n_max > DIRECT_N_MAX:
            raise CapacityError(
                f"direct correlation capped at N <= {DIRECT_N_MAX}, got {n_max}"
            )
        peak = int(a.max())
        if peak * peak * n_max >= 1 << 63:
            raise OverflowError("direct correlation would overflow int64")
        values = np.correlate(a, a, mode="full")[n_max - 1 :]
    elif method == "transform":
        if n_max > TRANSFORM_N_MAX:
            raise CapacityError(
                f"transform correlation capped at N <= {TRANSFORM_N_MAX}, got {n_max}"
            )
        v0 = int(np.dot(a, a))
        raw = ntt.autocorrelation([int(x) for x in a], value_bound=v0)
        if raw[0] != v0:
            raise InternalConsistencyError(
                f"transform V(0) = {raw[0]} disagrees with direct sum {v0}"
            )
        values = np.array(raw, dtype=np.int64)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'direct' or 'transform'")
    return CorrelationSeries(n_max=n_max, values=values, method=method)


def eval_D(alpha, n_max: int, table: DivisorTable | None = None) -> complex:
    """D(alpha, N) = sum_{n <= N} tau3(n) e(alpha n).

    A RationalPhase argument routes through exact residue bucketing (integer
    sums per residue class, then q complex terms); a float argument uses a
    compensated complex accumulation with the phase reduced mod 1.
    """
    a = _tau3_values(n_max, table)
    if isinstance(alpha, RationalPhase):
        q = alpha.q
        sums = _residue_class_sums(a, q)  # index r = n mod q
        z = 0.0 + 0.0j
        for r in range(q):
            z += float(sums[r]) * cmath.exp(2j * math.pi * ((alpha.a * r) % q) / q)
        return z
    phase = np.modf(float(alpha) * np.arange(1, n_max + 1, dtype=float))[0]
    w = a.astype(float)
    re = math.fsum(w * np.cos(2.0 * math.pi * phase))
    im = math.fsum(w * np.sin(2.0 * math.pi * phase))
    return complex(re, im)


def _residue_class_sums(values: np.ndarray, q: int) -> np.ndarray:
    """Exact sums of values[n-1] over n = 1..len grouped by n mod q."""
    n = len(values)
    out = np.zeros(q, dtype=np.int64)
    full = n // q
    if full:
        out += values[: full * q].reshape(full, q).sum(axis=0, dtype=np.int64)
    rest = values[full * q :]
    out[: len(rest)] += rest
    # slot j holds n = j+1, i.e. residue (j+1) mod q
    return np.roll(out, 1)


def eval_F(alpha: float, phase: RationalPhase, n_max: int) -> complex:
    """F(alpha, a/q, N): the main-term exponential sum

        (1/q) sum_{n <= N} ((A/2) log^2 n + B log n + C) e((alpha - a/q) n),

    whose weight is the increment of the cumulative main term n p(log n)/q
    (see the singular-series module for why the density form is the one
    that matches the correlation sums).
    """
    w = density_weight(phase.q, n_max)
    theta = float(alpha) - phase.a / phase.q
    ph = np.modf(theta * np.arange(1, n_max + 1, dtype=float))[0]
    re = math.fsum(w * np.cos(2.0 * math.pi * ph))
    im = math.fsum(w * np.sin(2.0 * math.pi * ph))
    return complex(re, im) / phase.q


@dataclass(frozen=True)
class GDeltaPair:
    farey: float
    fourier: float


def eval_G_delta(
    alpha: float,
    n_max: int,
    delta: int,
    rel_tol: float = 1e-6,
    profile: np.ndarray | None = None,
) -> GDeltaPair:
    """G_Delta(alpha, N) evaluated by both routes.

    Route 1 sums |F(alpha, a/q, N)|^2 over reduced fractions with q <= Delta;
    route 2 sums the Fourier series of the S_Delta profile.  The two are the
    same function by exact algebra, so a relative disagreement beyond
    rel_tol raises.
    """
    if delta < 1:
        raise ValueError(f"Delta must be >= 1, got {delta}")
    terms = []
    for q in range(1, delta + 1):
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                terms.append(abs(eval_F(alpha, RationalPhase(a, q), n_max)) ** 2)
    farey = math.fsum(terms)
    if profile is None:
        profile = s_delta_profile(n_max, delta)
    k = np.arange(1, n_max, dtype=float)
    fourier = profile[0] + 2.0 * math.fsum(
        profile[1:] * np.cos(2.0 * math.pi * float(alpha) * k)
    )
    if abs(farey - fourier) > rel_tol * max(1.0, abs(farey)):
        raise InternalConsistencyError(
            f"G_Delta routes disagree at alpha={alpha}: farey={farey!r} "
            f"fourier={fourier!r}"
        )
    return GDeltaPair(farey=farey, fourier=fourier)


def second_moment_statistic(
    n_max: int,
    delta: int | None = None,
    method: str = "auto",
    table: DivisorTable | None = None,
    threads: int = 1,
    series: CorrelationSeries | None = None,
    profile: np.ndarray | None = None,
) -> MomentStatistic:
    """Second moment of V - S_Delta over shifts 1 <= k <= N-1, and its
    ratio to N^(299/100)."""
    if n_max < 64:
        raise ValueError(f"need N >= 64, got {n_max}")
    if delta is None:
        delta = default_delta(n_max)
    if series is None:
        if method == "auto":
            method = "direct" if n_max <= 4096 else "transform"
        series = correlation_series(n_max, method=method, table=table)
    if profile is None:
        profile = s_delta_profile(n_max, delta, threads=threads)
    diff = series.values[1:].astype(float) - profile[1:]
    second_moment = math.fsum(diff * diff)
    return MomentStatistic(
        N=n_max,
        Delta=delta,
        second_moment=second_moment,
        ratio=second_moment / n_max**2.99,
    )
