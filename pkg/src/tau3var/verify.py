"""The composed verification suite behind the `verify` CLI command.

Runs every cross-route equivalence in the package (closed form vs brute
force, fast path vs oracle, dual evaluations) plus the lemma checks at
scales derived from a single size parameter n.  All sampling is seeded and
recorded; thread count parallelises independent checks only, so the report
is byte-identical across worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import lemmas
from .arith import (
    RationalPhase,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
    sieve,
    tau_k_pointwise,
)
from .constants import stieltjes0, stieltjes0_limit, stieltjes1, stieltjes1_limit
from .correlation import correlation_series, eval_D, eval_G_delta
from .singular import (
    bound_ratios,
    laurent_coeffs,
    laurent_coeffs_oracle,
    laurent_table,
    s_delta,
    s_delta_profile,
    weight_pair_sum,
    w_dot_t,
)
from .variance import q1

FORMAT_VERSION = "1"


def _check(check_id: str, passed: bool, **metrics) -> dict:
    rec = {"check_id": check_id, "passed": bool(passed)}
    rec.update(metrics)
    return rec


def run_verification_suite(
    n: int, seed: int = 1, threads: int = 1, pass_constant: float = 10.0
) -> dict:
    """All oracle equivalences and lemma checks at size n (n >= 256)."""
    if n < 256:
        raise ValueError(f"verification needs n >= 256, got {n}")
    rng = np.random.default_rng(seed)
    alphas = rng.random(20).tolist()
    spot_ns = sorted(int(v) for v in rng.integers(1, 20_000, size=60))
    coprime_pairs = []
    while len(coprime_pairs) < 40:
        a = int(rng.integers(2, 140))
        b = int(rng.integers(2, 140))
        if math.gcd(a, b) == 1 and a * b <= 20_000:
            coprime_pairs.append((a, b))
    # all sampling happens here, before any task can run on a pool
    grouping_triples = [
        (int(rng.integers(1, 13)), int(rng.integers(64, 512)))
        for _ in range(20)
    ]
    grouping_triples = [
        (q, nn, int(rng.integers(0, nn))) for q, nn in grouping_triples
    ]

    lemma_scale = min(25 * n, 200_000)
    tau3 = sieve("tau3", max(2 * n, 2 * lemma_scale, 20_000))
    tau2 = sieve("tau2", max(6 * lemma_scale, 20_000))

    tasks: list[tuple[str, object]] = []

    def ramanujan_exact():
        bad = 0
        for q in range(1, 121):
            for k in range(0, 121):
                if ramanujan_sum(q, k) != ramanujan_sum_bruteforce(q, k):
                    bad += 1
        return _check("ramanujan_closed_vs_bruteforce", bad == 0, mismatches=bad)

    def ramanujan_orthogonality():
        worst = 0
        for q in range(2, 121):
            s = sum(ramanujan_sum(q, k) for k in range(1, q + 1))
            worst = max(worst, abs(s))
        one = sum(ramanujan_sum(1, k) for k in range(1, 2))
        return _check("ramanujan_orthogonality", worst == 0 and one == 1, worst=worst)

    def sieve_vs_pointwise():
        bad = sum(1 for m in spot_ns if tau3[m] != tau_k_pointwise(3, m))
        return _check("tau3_sieve_vs_pointwise", bad == 0, mismatches=bad, samples=len(spot_ns))

    def multiplicativity():
        bad = sum(1 for a, b in coprime_pairs if tau3[a * b] != tau3[a] * tau3[b])
        return _check("tau3_multiplicativity", bad == 0, mismatches=bad, samples=len(coprime_pairs))

    def stieltjes_oracles():
        d0 = max(
            abs(stieltjes0(a) - stieltjes0_limit(a, m=10**5))
            for a in (1.0, 0.5, 1.0 / 3.0, 0.2)
        )
        d1 = max(
            abs(stieltjes1(a) - stieltjes1_limit(a, m=10**5))
            for a in (1.0, 0.5, 1.0 / 3.0)
        )
        return _check(
            "stieltjes_digamma_vs_raw_limit", d0 < 1e-8 and d1 < 1e-8, dev0=d0, dev1=d1
        )

    def laurent_vs_oracle():
        worst = 0.0
        for q in range(1, 25):
            per = laurent_coeffs(q)
            for a in range(1, q + 1):
                if math.gcd(a, q) == 1:
                    o = laurent_coeffs_oracle(q, a)
                    worst = max(
                        worst, abs(per.A - o.A), abs(per.B - o.B), abs(per.C - o.C)
                    )
        return _check("laurent_vs_triple_sum_oracle", worst < 1e-8, max_dev=worst)

    def laurent_batch():
        a_arr, b_arr, c_arr = laurent_table(512)
        worst = 0.0
        for q in range(1, 513):
            lc = laurent_coeffs(q)
            worst = max(
                worst, abs(a_arr[q] - lc.A), abs(b_arr[q] - lc.B), abs(c_arr[q] - lc.C)
            )
        return _check("laurent_batch_vs_per_q", worst < 1e-8, max_dev=worst)

    def laurent_growth():
        ratios = bound_ratios(2048)
        finite = all(math.isfinite(v) for v in ratios.values())
        return _check("laurent_log_growth", finite, **ratios)

    def correlation_methods():
        d = correlation_series(n, "direct", table=tau3)
        t = correlation_series(n, "transform", table=tau3)
        equal = bool(np.array_equal(d.values, t.values))
        return _check("correlation_direct_vs_transform", equal, n=n)

    def fourier_identity():
        ser = correlation_series(n, "direct", table=tau3)
        k = np.arange(1, n, dtype=float)
        vk = ser.values[1:].astype(float)
        worst = 0.0
        for alpha in alphas:
            lhs = abs(eval_D(float(alpha), n, table=tau3)) ** 2
            rhs = float(ser.values[0]) + 2.0 * math.fsum(
                vk * np.cos(2.0 * math.pi * alpha * k)
            )
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return _check("fourier_identity", worst <= 1e-6, max_rel=worst, n=n)

    def g_dual_route():
        m = min(n, 1024)
        worst = 0.0
        profile = s_delta_profile(m, 4)
        for alpha in alphas[:3]:
            pair = eval_G_delta(float(alpha), m, 4, profile=profile)
            worst = max(worst, abs(pair.farey - pair.fourier) / max(1.0, pair.farey))
        return _check("g_delta_dual_route", worst <= 1e-6, max_rel=worst, n=m)

    def weight_grouping():
        worst = 0.0
        for q, nn, k in grouping_triples:
            a = w_dot_t(q, k, nn)
            b = weight_pair_sum(q, k, nn)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        return _check("weight_grouping_vs_pair_sum", worst <= 1e-10, max_rel=worst)

    def s_delta_scalar_vs_profile():
        m = min(n, 1024)
        prof = s_delta_profile(m, 4)
        worst = max(
            abs(s_delta(m, 4, k) - prof[k]) / max(1.0, abs(prof[k]))
            for k in (1, 7, min(100, m - 1))
        )
        return _check("s_delta_scalar_vs_profile", worst <= 1e-8, max_rel=worst, n=m)

    def q1_routes():
        m = min(n, 4096)
        d = q1(m, "direct", table=tau3)
        i = q1(m, "identity", table=tau3)
        return _check("q1_direct_vs_identity", d == i, n=m, value=str(d))

    def lemma_suite():
        checks = []
        for q in (2, 3):
            checks.extend(lemmas.check_h_sums(lemma_scale, q, tau_table=tau2,
                                              pass_constant=pass_constant))
        for d in (1, 2, 6):
            checks.append(lemmas.check_taudm(d, lemma_scale, tau_table=tau2,
                                             pass_constant=pass_constant))
        for q in (2, 5):
            cs, _ = lemmas.cqdeltam_sweep(q, lemma_scale, tau_table=tau2,
                                          pass_constant=pass_constant)
            checks.extend(cs)
        checks.extend(lemmas.check_geometric_integrals(1000))
        for q in (1, 2, 3):
            cs, _ = lemmas.d_main_term_sweep(q, min(2 * lemma_scale, tau3.n_max),
                                             tau3_table=tau3,
                                             pass_constant=pass_constant)
            checks.extend(cs)
        worst = max(c.normalized_error for c in checks)
        return _check(
            "lemma_suite",
            all(c.passed for c in checks),
            max_normalized_error=worst,
            records=[c.as_record() for c in checks],
        )

    tasks = [
        ramanujan_exact,
        ramanujan_orthogonality,
        sieve_vs_pointwise,
        multiplicativity,
        stieltjes_oracles,
        laurent_vs_oracle,
        laurent_batch,
        laurent_growth,
        correlation_methods,
        fourier_identity,
        g_dual_route,
        weight_grouping,
        s_delta_scalar_vs_profile,
        q1_routes,
        lemma_suite,
    ]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(t) for t in tasks]
            records = [f.result() for f in futures]
    else:
        records = [t() for t in tasks]

    return {
        "format_version": FORMAT_VERSION,
        "config": {
            "n": n,
            "seed": seed,
            "pass_constant": pass_constant,
            "alphas": alphas,
        },
        "all_passed": all(r["passed"] for r in records),
        "checks": records,
    }
