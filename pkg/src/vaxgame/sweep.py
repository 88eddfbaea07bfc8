"""Public-precision sweep: equilibrium, reopening probability, severity.

For each public precision sigma on the configured grid the sweep solves
the threshold equilibrium, evaluates the reopening probability, builds the
equilibrium partition, checks the disease-free certificate, and reports a
steady-state severity. Severity has two modes:

* 'marginal' (default) — severity of the reopened steady state under the
  partition at the boundary realization theta = theta*, the worst state
  of the world that still reopens.
* 'expected' — average severity over theta conditional on reopening
  (theta <= theta*), by 32-node Gauss-Legendre quadrature in the
  conditional quantile domain.

Rows where the disease-free certificate holds carry severity exactly 0 by
definition. Per-sigma solver failures are recorded in the row's error
field and the sweep continues.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .config import SweepConfig
from .epidemic import disease_free_stable, steady_severity, steady_state
from .equilibrium import (ne_partition, reopening_probability, solve_threshold)
from .errors import ConfigError, VaxGameError
from .normal import std_normal_quantile
from .population import PopulationModel, SignalParams

CSV_HEADER = ("sigma", "theta_star", "reopen_prob", "coverage",
              "disease_free", "severity", "error")

_QUAD_NODES = 32


@dataclass(frozen=True)
class SweepRow:
    """One sweep grid point. Numeric fields are None when error is set."""

    sigma: float
    theta_star: float | None
    reopen_prob: float | None
    coverage: float | None
    disease_free: bool | None
    severity: float | None
    error: str = ""


def _partition_severity(theta: float, x_star: np.ndarray,
                        config: SweepConfig, signals: SignalParams) -> float:
    """Reopened-regime steady severity under the partition at realization theta."""
    partition = ne_partition(theta, x_star, config.model, signals)
    if disease_free_stable(config.epidemic, config.model, partition):
        return 0.0
    state = steady_state("+", config.epidemic, config.model, partition)
    return steady_severity(state, partition)


def _expected_severity(theta_star: float, x_star: np.ndarray, reopen: float,
                       config: SweepConfig, signals: SignalParams) -> float:
    """Average severity over theta | theta <= theta*, Gauss-Legendre quadrature.

    The conditional quantile transform theta(u) = mu + quantile(u * P) / sigma
    with P the reopening probability maps the conditional law to u uniform
    on (0, 1). Degenerate P underflowing to zero falls back to the marginal
    severity at theta*.
    """
    if reopen <= 0.0:
        return _partition_severity(theta_star, x_star, config, signals)
    nodes, weights = np.polynomial.legendre.leggauss(_QUAD_NODES)
    u = 0.5 * (nodes + 1.0)
    total = 0.0
    for uj, wj in zip(u, weights):
        theta_j = signals.mu + std_normal_quantile(uj * reopen) / signals.sigma
        total += 0.5 * wj * _partition_severity(theta_j, x_star, config, signals)
    return total


def sweep_point(sigma: float, config: SweepConfig,
                tol: float = 1e-12) -> SweepRow:
    """Evaluate one grid point; solver failures land in the error field."""
    signals = config.signals.with_sigma(float(sigma))
    try:
        result = solve_threshold(config.model, signals, config.econ.cost_c,
                                 tol=tol)
        theta_star = result.theta_star
        reopen = reopening_probability(theta_star, signals)
        partition = ne_partition(theta_star, result.x_star, config.model, signals)
        coverage = partition.coverage()
        disease_free = disease_free_stable(config.epidemic, config.model,
                                           partition)
        if disease_free:
            severity = 0.0
        elif config.severity_mode == "expected":
            severity = _expected_severity(theta_star, result.x_star, reopen,
                                          config, signals)
        else:
            state = steady_state("+", config.epidemic, config.model, partition)
            severity = steady_severity(state, partition)
    except VaxGameError as exc:
        return SweepRow(float(sigma), None, None, None, None, None,
                        f"{type(exc).__name__}: {exc}")
    return SweepRow(float(sigma), theta_star, reopen, coverage, disease_free,
                    severity)


def run_sweep(config: SweepConfig, tol: float = 1e-12) -> list[SweepRow]:
    """Evaluate every grid point, in grid order."""
    if config.sigma_grid is None:
        raise ConfigError("configuration has no sweep.sigma_grid")
    return [sweep_point(sigma, config, tol=tol) for sigma in config.sigma_grid]


def suggest_region(rows: list[SweepRow],
                   target: float) -> tuple[float, float] | None:
    """Grid interval meeting both the reopening target and disease freedom.

    Returns (sigma_lo, sigma_hi) where sigma_lo is the smallest grid sigma
    whose reopening probability reaches the target and sigma_hi the largest
    with the disease-free certificate true, or None when the interval is
    empty or either criterion is never met.
    """
    sigma_lo = next((r.sigma for r in rows
                     if r.error == "" and r.reopen_prob >= target), None)
    sigma_hi = next((r.sigma for r in reversed(rows)
                     if r.error == "" and r.disease_free), None)
    if sigma_lo is None or sigma_hi is None or sigma_lo > sigma_hi:
        return None
    return (sigma_lo, sigma_hi)


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return f"{value:.12g}"


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    """Write rows to CSV with the fixed schema, byte-deterministically."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([
                _format_value(row.sigma),
                _format_value(row.theta_star),
                _format_value(row.reopen_prob),
                _format_value(row.coverage),
                _format_value(row.disease_free),
                _format_value(row.severity),
                row.error,
            ])
