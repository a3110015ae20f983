"""Trend aggregation and figure rendering for the `report` command.

Re-runs the correlation statistic and the variance sweep over an N grid,
writes a plot-ready trend table, and renders the figures next to it:

    trend.csv / report.json      ratio(N), Q(N), leading ratios, fit
    fig_moment_trend.png       second-moment ratio vs N
    fig_variance_trend.png       Q/(N^2 log^8 N) vs N with the Euler-product
                                 constant for reference
    fig_correlation_profile.png  V vs S_Delta overlay at the largest N
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .arith import sieve
from .constants import s8_constant
from .correlation import correlation_series, default_delta, second_moment_statistic
from .singular import s_delta_profile
from .variance import FULL_SWEEP_MAX, fit_leading_coefficient, variance_Q


def build_report(cfg, grid: list[int]) -> int:
    from .cli import write_csv, write_json  # shared atomic writers

    table = sieve("tau3", max(grid))
    s8 = s8_constant(10**5)

    stats = []
    var_reports = []
    last_profile = None
    last_series = None
    for n in grid:
        delta = default_delta(n, cfg.delta_exponent)
        method = "direct" if n <= 4096 else "transform"
        series = correlation_series(n, method=method, table=table)
        profile = s_delta_profile(n, delta, threads=cfg.threads)
        stats.append(
            second_moment_statistic(n, delta=delta, table=table, series=series, profile=profile)
        )
        var_reports.append(
            variance_Q(
                n,
                table=table,
                threads=cfg.threads,
                with_q1=False,
                subsample=n > FULL_SWEEP_MAX,
            )
        )
        last_profile, last_series = profile, series

    fit = None
    exact_var = [r for r in var_reports if not r.estimated]
    if len(exact_var) >= 4:
        fit, _ = fit_leading_coefficient(
            [r.N for r in exact_var], [r.Q for r in exact_var]
        )

    rows = [
        (
            st.N,
            st.Delta,
            st.second_moment,
            st.ratio,
            vr.Q,
            vr.leading_ratio,
            vr.leading_ratio / s8.value,
            int(vr.estimated),
        )
        for st, vr in zip(stats, var_reports)
    ]
    write_csv(
        os.path.join(cfg.out_dir, "trend.csv"),
        ["N", "Delta", "second_moment", "ratio", "Q", "leading_ratio",
         "leading_ratio_over_S8", "estimated"],
        rows,
        cfg,
    )
    write_json(
        os.path.join(cfg.out_dir, "report.json"),
        {
            "S8_reference": s8.value,
            "S8_tail_bound": s8.tail_bound,
            "fit_S8": fit,
            "second_moment_trend": [
                {"N": st.N, "Delta": st.Delta, "second_moment": st.second_moment,
                 "ratio": st.ratio}
                for st in stats
            ],
            "variance": [
                {"N": r.N, "Q": r.Q, "leading_ratio": r.leading_ratio,
                 "estimated": r.estimated}
                for r in var_reports
            ],
        },
        cfg,
    )

    ns = [st.N for st in stats]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(ns, [st.ratio for st in stats], "o-", label="second moment / N^2.99")
    ax.set_xlabel("N")
    ax.set_ylabel("ratio")
    ax.set_title("correlation second-moment trend")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(cfg.out_dir, "fig_moment_trend.png"), dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogx(ns, [vr.leading_ratio for vr in var_reports], "o-",
                label="Q / (N^2 log^8 N)")
    ax.axhline(s8.value, color="crimson", ls="--",
               label="Euler-product constant")
    if fit is not None:
        ax.axhline(fit, color="gray", ls=":", label="degree-8 fit leading coeff")
    ax.set_xlabel("N")
    ax.set_ylabel("leading ratio")
    ax.set_title("progression-variance leading ratio")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(cfg.out_dir, "fig_variance_trend.png"), dpi=150)
    plt.close(fig)

    n_last = grid[-1]
    ks = np.arange(1, n_last)
    step = max(1, len(ks) // 4000)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(ks[::step], last_series.values[1:][::step], ".", ms=2, alpha=0.5,
            label="V(k, N)")
    ax.plot(ks[::step], last_profile[1:][::step], ",", color="crimson",
            label="S_Delta(k, N)")
    ax.set_xlabel("k")
    ax.set_ylabel("value")
    ax.set_title(f"correlation profile at N = {n_last}")
    ax.legend(markerscale=4)
    fig.tight_layout()
    fig.savefig(os.path.join(cfg.out_dir, "fig_correlation_profile.png"), dpi=150)
    plt.close(fig)
    return 0
