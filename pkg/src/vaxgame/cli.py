"""Command-line entry point.

Subcommands, all driven by a single TOML/JSON configuration file:

* scenario — solve the threshold equilibrium and report theta*, the
  per-type signal cutoffs, the reopening probability, and the equilibrium
  partition's coverage; optionally dump both regimes' trajectories.
* verify — run the strategic-interaction checks (complementarity under
  regime switching, substitutes under a fixed regime) on the equilibrium
  partition and print the evidence; exits 0 only if every enabled check
  passes, including the complementarity premise.
* sweep — evaluate the public-precision grid and write the CSV table.
* suggest — print the precision interval meeting the reopening target
  while keeping the disease-free certificate.

Exit codes: 0 success, 1 solver/integration failure (or a failed verify
check / failed sweep row), 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SEVERITY_MODES, SweepConfig, load_config
from .epidemic import integrate, write_trajectory_csv
from .equilibrium import (ne_partition, reopening_probability, solve_threshold)
from .errors import ConfigError, VaxGameError
from .incentives import complementarity_check, substitutes_check
from .sweep import run_sweep, suggest_region, write_sweep_csv

_EXIT_OK = 0
_EXIT_SOLVER = 1
_EXIT_CONFIG = 2


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _solve(config: SweepConfig, tol: float):
    result = solve_threshold(config.model, config.signals, config.econ.cost_c,
                             tol=tol)
    partition = ne_partition(result.theta_star, result.x_star, config.model,
                             config.signals)
    return result, partition


def _dump_trajectories(config: SweepConfig, partition, dump_dir: str) -> None:
    out = Path(dump_dir)
    out.mkdir(parents=True, exist_ok=True)
    for regime, name in (("+", "trajectory_plus.csv"),
                         ("-", "trajectory_minus.csv")):
        traj = integrate(regime, config.epidemic, config.model, partition,
                         config.initial_profile, step=config.step)
        write_trajectory_csv(traj, config.model, out / name)
        print(f"wrote {out / name}")


def _cmd_scenario(config: SweepConfig, args) -> int:
    result, partition = _solve(config, args.tol)
    print(f"theta_star   = {_fmt(result.theta_star)}")
    for k, x in enumerate(result.x_star, start=1):
        print(f"x_star[k={k}]  = {_fmt(float(x))}")
    reopen = reopening_probability(result.theta_star, config.signals)
    print(f"reopen_prob  = {_fmt(reopen)}")
    print(f"coverage     = {_fmt(partition.coverage())}")
    if result.unique:
        print("uniqueness   = condition holds (single equilibrium)")
    else:
        roots = ", ".join(_fmt(r) for r in result.roots_found)
        print(f"uniqueness   = NOT guaranteed; roots found: {roots} "
              "(smallest reported)")
    if args.dump_trajectories:
        _dump_trajectories(config, partition, args.dump_trajectories)
    return _EXIT_OK


def _cmd_verify(config: SweepConfig, args) -> int:
    _, partition = _solve(config, args.tol)
    opts = config.verify
    all_pass = True
    if opts.complementarity:
        report = complementarity_check(config.epidemic, config.econ,
                                       config.model, partition,
                                       config.initial_profile,
                                       step=config.step)
        print("[complementarity under regime switching]")
        for line in report.summary_lines(config.model):
            print(f"  {line}")
        all_pass &= report.premise_holds and report.complementarity_holds
    if opts.substitutes:
        report = substitutes_check(opts.substitutes_regime, config.epidemic,
                                   config.econ, config.model, partition,
                                   opts.coverage_bump, config.initial_profile,
                                   step=config.step)
        print("[substitutes under a fixed regime]")
        for line in report.summary_lines(config.model):
            print(f"  {line}")
        all_pass &= report.decreasing_holds
    if not (opts.complementarity or opts.substitutes):
        print("no checks enabled in [verify]")
    print(f"overall: {'PASS' if all_pass else 'FAIL'}")
    return _EXIT_OK if all_pass else _EXIT_SOLVER


def _cmd_sweep(config: SweepConfig, args) -> int:
    out = args.out or config.out
    if out is None:
        raise ConfigError("no output path: pass --out or set sweep.out")
    rows = run_sweep(config, tol=args.tol)
    write_sweep_csv(rows, out)
    failed = sum(1 for r in rows if r.error)
    print(f"wrote {len(rows)} rows to {out}" +
          (f" ({failed} with errors)" if failed else ""))
    return _EXIT_SOLVER if failed else _EXIT_OK


def _cmd_suggest(config: SweepConfig, args) -> int:
    rows = run_sweep(config, tol=args.tol)
    region = suggest_region(rows, config.target_reopen_probability)
    target = config.target_reopen_probability
    if region is None:
        print(f"suggested region for target {_fmt(target)}: empty")
    else:
        lo, hi = region
        print(f"suggested region for target {_fmt(target)}: "
              f"[{_fmt(lo)}, {_fmt(hi)}]")
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vaxgame",
        description="Vaccination-game epidemic control: equilibrium solving, "
                    "interaction checks, and public-precision sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="TOML or JSON configuration file")
        p.add_argument("--tol", type=float, default=1e-12,
                       help="equilibrium solver tolerance (default 1e-12)")
        p.add_argument("--severity-mode", choices=SEVERITY_MODES, default=None,
                       help="override the configured severity mode")
        p.add_argument("--dump-trajectories", metavar="DIR", default=None,
                       help="write both regimes' trajectory CSVs to DIR")

    p = sub.add_parser("scenario", help="solve and report one equilibrium")
    add_common(p)
    p = sub.add_parser("verify", help="run the strategic-interaction checks")
    add_common(p)
    p = sub.add_parser("sweep", help="run the public-precision sweep to CSV")
    add_common(p)
    p.add_argument("--out", default=None,
                   help="output CSV path (overrides sweep.out)")
    p = sub.add_parser("suggest", help="print the suggested precision region")
    add_common(p)
    return parser


_COMMANDS = {
    "scenario": _cmd_scenario,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "suggest": _cmd_suggest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.severity_mode is not None:
            config = SweepConfig(
                model=config.model, epidemic=config.epidemic, econ=config.econ,
                signals=config.signals, initial_profile=config.initial_profile,
                step=config.step, sigma_grid=config.sigma_grid,
                target_reopen_probability=config.target_reopen_probability,
                severity_mode=args.severity_mode, out=config.out,
                verify=config.verify)
        if args.tol <= 0:
            raise ConfigError(f"--tol must be positive, got {args.tol!r}")
        return _COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except VaxGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
