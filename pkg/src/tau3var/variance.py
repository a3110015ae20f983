"""Variance of tau3 over arithmetic progressions.

Q(N) = sum over moduli l <= N and all residues b of the squared deviation
of the progression sum S(N; l, b) = sum_{n <= N, n = b (l)} tau3(n) from its
expected main term N * P2(log N; l, b), the residue polynomial with the
divisor-averaged Laurent coefficients.

The pure correlation part

    Q1(N) = sum_{l <= N} sum_{n1 = n2 (l)} tau3(n1) tau3(n2)

has two independent routes: the literal per-modulus bucket squares, and the
divisor-switch identity

    Q1(N) = N sum tau3(n)^2 + 2 sum_{k=1}^{N-1} V(k, N) tau(k)

(each off-diagonal pair with difference k is counted once per divisor of k).
Exact integer equality of the two certifies the correlation series, the
divisor tables and the switch simultaneously.

Everything that feeds Q is vectorised per modulus: residue bucket sums by
reshaping, EMT values by gcd classes (the divisor-averaged coefficients
depend on b only through gcd(l, b)), with the per-modulus contributions
reduced in ascending-l order through exactly rounded summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import DivisorTable, sieve
from .correlation import CorrelationSeries, correlation_series
from .errors import CapacityError
from .singular import laurent_table

FULL_SWEEP_MAX = 1 << 16
Q1_DIRECT_MAX = 1 << 13


@dataclass(frozen=True)
class APSumTable:
    N: int
    ell: int
    sums: np.ndarray  # index b-1 for b = 1..ell, exact int64

    def __getitem__(self, b: int) -> int:
        return int(self.sums[b - 1])


@dataclass(frozen=True)
class VarianceReport:
    N: int
    Q: float
    Q1_direct: int | None
    Q1_identity: int
    leading_ratio: float  # Q / (N^2 log^8 N)
    fit_S8: float | None = None
    estimated: bool = False  # True when the l-sweep was subsampled


def _residue_sums(values: np.ndarray, ell: int) -> np.ndarray:
    """Column sums of values[n-1] over n = 1..len grouped by residue b = 1..ell.

    Slot j holds the class n = j+1 (mod ell), so slot ell-1 is b = ell = 0 (mod ell).
    """
    n = len(values)
    out = np.zeros(ell, dtype=np.int64)
    full = n // ell
    if full:
        out += values[: full * ell].reshape(full, ell).sum(axis=0, dtype=np.int64)
    rest = values[full * ell :]
    out[: len(rest)] += rest
    return out


def ap_sums(n_max: int, ell: int, table: DivisorTable | None = None) -> APSumTable:
    """Exact progression sums of tau3 for every residue class mod ell."""
    if not 1 <= ell <= n_max:
        raise ValueError(f"need 1 <= ell <= N, got ell={ell}, N={n_max}")
    if table is None:
        table = sieve("tau3", n_max)
    vals = table.values[1 : n_max + 1]
    return APSumTable(N=n_max, ell=ell, sums=_residue_sums(vals, ell))


def _divisor_lists(n_max: int) -> list[list[int]]:
    divs: list[list[int]] = [[] for _ in range(n_max + 1)]
    for d in range(1, n_max + 1):
        for m in range(d, n_max + 1, d):
            divs[m].append(d)
    return divs


def _cq_of_gcd(q: int, d: int, mu: np.ndarray, phi: np.ndarray) -> int:
    """c_q at any argument with gcd(q, .) = gcd(q, d), via the mu-phi closed form."""
    g = math.gcd(q, d)
    m = q // g
    if mu[m] == 0:
        return 0
    return int(mu[m]) * int(phi[q]) // int(phi[m])


def q1(
    n_max: int,
    route: str,
    table: DivisorTable | None = None,
    series: CorrelationSeries | None = None,
) -> int:
    """Q1(N) by 'direct' bucket squares or the 'identity' divisor switch."""
    if table is None:
        table = sieve("tau3", n_max)
    vals = table.values[1 : n_max + 1]
    if route == "direct":
        if n_max > Q1_DIRECT_MAX:
            raise CapacityError(
                f"direct Q1 route capped at N <= {Q1_DIRECT_MAX}, got {n_max}"
            )
        total_tau3 = int(vals.sum())
        if n_max * total_tau3 * total_tau3 >= 1 << 63:
            raise OverflowError("direct Q1 accumulation would overflow int64")
        total = 0
        for ell in range(1, n_max + 1):
            s = _residue_sums(vals, ell)
            total += int(np.dot(s, s))
        return total
    if route == "identity":
        if series is None:
            method = "direct" if n_max <= 4096 else "transform"
            series = correlation_series(n_max, method=method, table=table)
        tau = sieve("tau2", n_max - 1).values if n_max > 1 else np.zeros(1, np.int64)
        v0 = int(np.dot(vals, vals))
        if n_max > 1:
            vk = series.values[1:]
            if int(tau[1:].max(initial=0)) * int(vk.max(initial=0)) * n_max >= 1 << 63:
                raise OverflowError("identity Q1 accumulation would overflow int64")
            cross = int(np.dot(tau[1 : n_max], vk))
        else:
            cross = 0
        return n_max * v0 + 2 * cross
    raise ValueError(f"unknown route {route!r}; expected 'direct' or 'identity'")


def _emt_by_gcd_class(
    ell: int,
    divs: list[int],
    laurent: tuple[np.ndarray, np.ndarray, np.ndarray],
    mu: np.ndarray,
    phi: np.ndarray,
) -> dict[int, tuple[float, float, float]]:
    """(A~, B~, C~)(ell, b) for each gcd class d = gcd(ell, b), d | ell."""
    a_arr, b_arr, c_arr = laurent
    out = {}
    for d in divs:
        at = bt = ct = 0.0
        for q in divs:
            cq = _cq_of_gcd(q, d, mu, phi)
            if cq == 0:
                continue
            w = cq / q
            at += w * a_arr[q]
            bt += w * b_arr[q]
            ct += w * c_arr[q]
        out[d] = (at / ell, bt / ell, ct / ell)
    return out


def variance_Q(
    n_max: int,
    table: DivisorTable | None = None,
    threads: int = 1,
    with_q1: bool = True,
    series: CorrelationSeries | None = None,
    subsample: bool = False,
) -> VarianceReport:
    """Full variance sweep at one N.

    Deviation = S(N; l, b) - N * P2(log N; l, b) with
    P2(x) = (A~/2) x^2 - (A~ - B~) x + (A~ - B~ + C~); the per-modulus squared
    sums are reduced in ascending-l order with exactly rounded summation.
    subsample=True evaluates a geometric l-grid only and rescales -- an
    estimate, flagged in the report, never a verified value.
    """
    if n_max < 16:
        raise ValueError(f"need N >= 16, got {n_max}")
    if n_max > FULL_SWEEP_MAX and not subsample:
        raise CapacityError(
            f"full variance sweep capped at N <= {FULL_SWEEP_MAX}; "
            "pass subsample=True for an estimate"
        )
    if table is None:
        table = sieve("tau3", n_max)
    vals = table.values[1 : n_max + 1]
    logn = math.log(n_max)
    laurent = laurent_table(n_max)
    mu = sieve("mu", n_max).values
    phi = sieve("phi", n_max).values
    divlists = _divisor_lists(n_max)

    if subsample:
        grid = set()
        x = 1.0
        while x <= n_max:
            grid.add(int(round(x)))
            x *= 1.25
        grid.add(n_max)
        ells = sorted(grid)
    else:
        ells = list(range(1, n_max + 1))

    # P2 combines linearly in (A~, B~, C~); fold the log powers in first.
    ca = 0.5 * logn * logn - logn + 1.0
    cb = logn - 1.0
    cc = 1.0

    def modulus_square_sum(ell: int) -> float:
        s = _residue_sums(vals, ell).astype(float)
        emt = _emt_by_gcd_class(ell, divlists[ell], laurent, mu, phi)
        lut = np.zeros(ell + 1)
        for d, (at, bt, ct) in emt.items():
            lut[d] = ca * at + cb * bt + cc * ct
        b = np.arange(1, ell + 1, dtype=np.int64)
        dev = s - n_max * lut[np.gcd(b, ell)]
        return float(np.dot(dev, dev))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(modulus_square_sum, ells))
    else:
        parts = [modulus_square_sum(ell) for ell in ells]

    if subsample:
        # trapezoid in l over the geometric grid
        q_total = 0.0
        for i, ell in enumerate(ells):
            lo = ells[i - 1] + 1 if i else 1
            hi = ell
            q_total += parts[i] * (hi - lo + 1)
        q_val = q_total
    else:
        q_val = math.fsum(parts)

    q1_direct = None
    q1_ident = None
    if with_q1 and not subsample:
        if n_max <= Q1_DIRECT_MAX:
            q1_direct = q1(n_max, "direct", table=table)
        q1_ident = q1(n_max, "identity", table=table, series=series)

    return VarianceReport(
        N=n_max,
        Q=q_val,
        Q1_direct=q1_direct,
        Q1_identity=q1_ident if q1_ident is not None else 0,
        leading_ratio=q_val / (n_max**2 * logn**8),
        estimated=subsample,
    )


def fit_leading_coefficient(
    ns: list[int], qs: list[float], n_terms: int = 4
) -> tuple[float, list[float]]:
    """Leading coefficient of a degree-8 fit of Q(N)/N^2 in log N.

    The model is the degree-8 polynomial sum c_j (log N)^j; with a handful
    of grid points only the top n_terms coefficients are identifiable, so
    the lower ones are pinned at zero.  Returns (c_8, residuals of the fit
    in units of Q/N^2).
    """
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(qs, dtype=float) / np.asarray(ns, dtype=float) ** 2
    powers = list(range(8, 8 - n_terms, -1))
    basis = np.stack([x**p for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    resid = y - basis @ coef
    return float(coef[0]), resid.tolist()


def variance_sweep(
    n_grid: list[int],
    threads: int = 1,
    table: DivisorTable | None = None,
    fit_terms: int = 4,
) -> list[VarianceReport]:
    """variance_Q over a grid, with the degree-8 leading-coefficient fit
    attached to every report."""
    if sorted(set(n_grid)) != list(n_grid):
        raise ValueError("n_grid must be strictly increasing")
    if table is None:
        table = sieve("tau3", max(n_grid))
    reports = [variance_Q(n, table=table, threads=threads) for n in n_grid]
    if len(n_grid) >= fit_terms:
        c8, _ = fit_leading_coefficient([r.N for r in reports], [r.Q for r in reports], fit_terms)
        reports = [
            VarianceReport(
                N=r.N,
                Q=r.Q,
                Q1_direct=r.Q1_direct,
                Q1_identity=r.Q1_identity,
                leading_ratio=r.leading_ratio,
                fit_S8=c8,
                estimated=r.estimated,
            )
            for r in reports
        ]
    return reports


def emt_tail_bounds(n_max: int, checkpoints: list[int] | None = None) -> dict:
    """sum_{l <= N} sum_b A~(l,b)^2 (and B~, C~) with measured log-growth.

    Evaluated per gcd class: the class d = gcd(l, b) contains phi(l/d)
    residues, so the inner sum is sum_{d | l} phi(l/d) A~(l, d)^2.
    """
    if n_max > 10**4:
        raise CapacityError(f"emt_tail_bounds capped at N <= 10^4, got {n_max}")
    if checkpoints is None:
        checkpoints = [n for n in (10, 100, 1000, n_max) if n <= n_max]
    laurent = laurent_table(n_max)
    mu = sieve("mu", n_max).values
    phi = sieve("phi", n_max).values
    divlists = _divisor_lists(n_max)
    sums = {"A": 0.0, "B": 0.0, "C": 0.0}
    rows = []
    marks = sorted(set(checkpoints))
    mark_idx = 0
    for ell in range(1, n_max + 1):
        emt = _emt_by_gcd_class(ell, divlists[ell], laurent, mu, phi)
        for d, (at, bt, ct) in emt.items():
            count = int(phi[ell // d])
            sums["A"] += count * at * at
            sums["B"] += count * bt * bt
            sums["C"] += count * ct * ct
        if mark_idx < len(marks) and ell == marks[mark_idx]:
            lg = math.log(ell + 1.0)
            rows.append(
                {
                    "ell_max": ell,
                    "sum_A2": sums["A"],
                    "sum_B2": sums["B"],
                    "sum_C2": sums["C"],
                    "kappa_A": sums["A"] / lg**2,
                    "kappa_B": sums["B"] / lg**2,
                    "kappa_C": sums["C"] / lg**2,
                }
            )
            mark_idx += 1
    return {
        "n_max": n_max,
        "checkpoints": rows,
        "kappa_A": max(r["kappa_A"] for r in rows),
        "kappa_B": max(r["kappa_B"] for r in rows),
        "kappa_C": max(r["kappa_C"] for r in rows),
    }


def prime_emt_square_sum(ell: int) -> float:
    """Closed-form sum_b A~(ell, b)^2 for prime ell (spot oracle).

    c_ell(b) is -1 off the zero class and ell-1 on it, and A(ell) for prime
    ell is 1 + (ell-1)/ell, so A~ takes just two values: (1 - A(ell)/ell)/ell
    on ell-1 classes and (1 + (ell-1) A(ell)/ell)/ell on one.
    """
    a_ell = 1.0 + (ell - 1) / ell
    off = (1.0 - a_ell / ell) / ell
    on = (1.0 + (ell - 1) * a_ell / ell) / ell
    return (ell - 1) * off * off + on * on
