"""Command-line experiment runner.

Subcommands:
    sieve      exact divisor-function tables (CSV + JSON summary)
    correlate  V(k,N) vs S_Delta profile and the second-moment statistic
    singular   Laurent coefficients, weights and growth ratios
    variance   progression-variance sweep over an N grid
    verify     the full cross-route verification suite (exit 0 iff green)
    report     aggregate trend tables over an N grid, with figures

Every output embeds the effective config and a format version.  Files are
written via a temp file and os.replace, so an interrupted run never leaves
a partial artifact.  Outputs are byte-identical for identical configs; the
thread flag changes wall time only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .arith import SIEVE_KINDS, sieve
from .constants import s8_constant
from .correlation import correlation_series, default_delta, second_moment_statistic
from .singular import bound_ratios, laurent_table, s_delta_profile, weights
from .variance import FULL_SWEEP_MAX, fit_leading_coefficient, variance_Q
from .verify import FORMAT_VERSION, run_verification_suite

DEFAULT_DELTA_EXPONENT = 4.0 / 19.0


@dataclass
class RunConfig:
    command: str
    n: int = 2048
    n_grid: list[int] | None = None
    delta_exponent: float = DEFAULT_DELTA_EXPONENT
    seed: int = 1
    threads: int = 1
    out_dir: str = "out"
    fmt: str = "csv"
    method: str = "auto"
    pass_constant: float = 10.0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "n": self.n,
            "n_grid": self.n_grid,
            "delta_exponent": self.delta_exponent,
            "seed": self.seed,
            "threads": self.threads,
            "out_dir": self.out_dir,
            "format": self.fmt,
            "method": self.method,
            "pass_constant": self.pass_constant,
        }


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt_value(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path: str, header: list[str], rows, config: RunConfig) -> None:
    lines = [f"# format_version={FORMAT_VERSION}", f"# config={json.dumps(config.as_dict())}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt_value(v) for v in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def write_table(base_path: str, header: list[str], rows, config: RunConfig) -> None:
    """Tabular artifact in the configured format (csv default, or json rows)."""
    if config.fmt == "json":
        payload = {
            "columns": header,
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        write_json(base_path + ".json", payload, config)
    else:
        write_csv(base_path + ".csv", header, rows, config)


def _json_cell(v):
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def write_json(path: str, payload: dict, config: RunConfig) -> None:
    doc = {"format_version": FORMAT_VERSION, "config": config.as_dict()}
    doc.update(payload)
    _write_atomic(path, json.dumps(doc, indent=2) + "\n")


def _delta_for(cfg: RunConfig, n: int) -> int:
    return default_delta(n, cfg.delta_exponent)


def cmd_sieve(cfg: RunConfig) -> int:
    tables = {kind: sieve(kind, cfg.n) for kind in SIEVE_KINDS}
    rows = (
        [n] + [int(tables[k].values[n]) for k in SIEVE_KINDS]
        for n in range(1, cfg.n + 1)
    )
    write_table(
        os.path.join(cfg.out_dir, "sieve"),
        ["n", *SIEVE_KINDS],
        rows,
        cfg,
    )
    summary = {
        kind: {
            "sum": int(tables[kind].values.sum()),
            "max": int(tables[kind].values.max()),
        }
        for kind in SIEVE_KINDS
    }
    write_json(os.path.join(cfg.out_dir, "sieve_summary.json"), {"tables": summary}, cfg)
    return 0


def cmd_correlate(cfg: RunConfig) -> int:
    table = sieve("tau3", cfg.n)
    method = cfg.method
    if method == "auto":
        method = "direct" if cfg.n <= 4096 else "transform"
    series = correlation_series(cfg.n, method=method, table=table)
    delta = _delta_for(cfg, cfg.n)
    profile = s_delta_profile(cfg.n, delta, threads=cfg.threads)
    stat = second_moment_statistic(
        cfg.n, delta=delta, table=table, series=series, profile=profile
    )
    rows = (
        (k, int(series.values[k]), profile[k], float(series.values[k]) - profile[k])
        for k in range(cfg.n)
    )
    write_table(
        os.path.join(cfg.out_dir, "correlation"),
        ["k", "V", "S_delta", "diff"],
        rows,
        cfg,
    )
    write_json(
        os.path.join(cfg.out_dir, "correlate_summary.json"),
        {
            "N": stat.N,
            "Delta": stat.Delta,
            "method": method,
            "second_moment": stat.second_moment,
            "ratio": stat.ratio,
        },
        cfg,
    )
    return 0


def cmd_singular(cfg: RunConfig) -> int:
    q_max = max(_delta_for(cfg, cfg.n), 16)
    a_arr, b_arr, c_arr = laurent_table(q_max)
    rows = []
    for q in range(1, q_max + 1):
        w = weights(q).w
        rows.append([q, a_arr[q], b_arr[q], c_arr[q], *w])
    write_table(
        os.path.join(cfg.out_dir, "singular"),
        ["q", "A", "B", "C", "w1", "w2", "w3", "w4", "w5", "w6"],
        rows,
        cfg,
    )
    write_json(
        os.path.join(cfg.out_dir, "singular_summary.json"),
        {"q_max": q_max, "growth_ratios": bound_ratios(min(cfg.n, 10**4))},
        cfg,
    )
    return 0


def cmd_variance(cfg: RunConfig) -> int:
    grid = cfg.n_grid or [cfg.n]
    table = sieve("tau3", max(grid))
    reports = [
        variance_Q(
            n, table=table, threads=cfg.threads, subsample=n > FULL_SWEEP_MAX
        )
        for n in grid
    ]
    exact = [r for r in reports if not r.estimated]
    fit, fit_residuals = None, None
    if len(exact) >= 4:
        fit, fit_residuals = fit_leading_coefficient(
            [r.N for r in exact], [r.Q for r in exact]
        )
    rows = [
        (
            r.N,
            r.Q,
            r.Q1_identity,
            r.leading_ratio,
        )
        for r in reports
    ]
    write_table(
        os.path.join(cfg.out_dir, "variance"),
        ["N", "Q", "Q1", "leading_ratio"],
        rows,
        cfg,
    )
    s8 = s8_constant(10**5)
    write_json(
        os.path.join(cfg.out_dir, "variance_summary.json"),
        {
            "reports": [
                {
                    "N": r.N,
                    "Q": r.Q,
                    "Q1_direct": None if r.Q1_direct is None else str(r.Q1_direct),
                    "Q1_identity": str(r.Q1_identity),
                    "leading_ratio": r.leading_ratio,
                    "estimated": r.estimated,
                }
                for r in reports
            ],
            "fit_S8": fit,
            "fit_residuals": fit_residuals,
            "S8_reference": s8.value,
            "S8_tail_bound": s8.tail_bound,
        },
        cfg,
    )
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    result = run_verification_suite(
        cfg.n, seed=cfg.seed, threads=cfg.threads, pass_constant=cfg.pass_constant
    )
    # the suite result embeds its own semantic config (n, seed, pass
    # constant, sampled alphas); thread count and paths are execution-only
    # and must not break byte-identity across worker counts
    _write_atomic(
        os.path.join(cfg.out_dir, "verify.json"), json.dumps(result, indent=2) + "\n"
    )
    for rec in result["checks"]:
        status = "pass" if rec["passed"] else "FAIL"
        print(f"[{status}] {rec['check_id']}")
    return 0 if result["all_passed"] else 1


def cmd_report(cfg: RunConfig) -> int:
    from .report import build_report

    grid = cfg.n_grid or [1 << e for e in range(10, 14)]
    return build_report(cfg, grid)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tau3var",
        description="correlation sums, singular series and progression "
        "variance for the three-fold divisor function",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("sieve", "correlate", "singular", "variance", "verify", "report"):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=2048)
        p.add_argument("--n-grid", type=str, default=None,
                       help="comma-separated strictly increasing sizes")
        p.add_argument("--delta-exponent", type=float, default=DEFAULT_DELTA_EXPONENT)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", type=str, default="out")
        p.add_argument("--format", type=str, choices=("csv", "json"), default="csv")
        p.add_argument("--method", type=str, choices=("auto", "direct", "transform"),
                       default="auto")
        p.add_argument("--pass-constant", type=float, default=10.0)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    grid = None
    if args.n_grid:
        try:
            grid = [int(tok) for tok in args.n_grid.split(",") if tok]
        except ValueError:
            parser.error("--n-grid: expected comma-separated integers")
        if grid != sorted(set(grid)):
            parser.error("--n-grid: grid must be strictly increasing")
    if args.n < 2:
        parser.error("--n: must be >= 2")
    if not 0.0 < args.delta_exponent < 1.0:
        parser.error("--delta-exponent: must lie in (0, 1)")
    if args.threads < 1:
        parser.error("--threads: must be >= 1")
    return RunConfig(
        command=args.command,
        n=args.n,
        n_grid=grid,
        delta_exponent=args.delta_exponent,
        seed=args.seed,
        threads=args.threads,
        out_dir=args.out,
        fmt=args.format,
        method=args.method,
        pass_constant=args.pass_constant,
    )


_COMMANDS = {
    "sieve": cmd_sieve,
    "correlate": cmd_correlate,
    "singular": cmd_singular,
    "variance": cmd_variance,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    cfg = parse_config(argv)
    os.makedirs(cfg.out_dir, exist_ok=True)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
