"""Configuration loading for the command-line tools.

A single TOML or JSON file (auto-detected by extension) describes the
population, epidemic, payoff, and signal blocks plus optional sweep,
scenario, and verify settings. All parameters are explicit; the only
defaults are the documented ones (integration step 0.01, initial profile
0.01..0.05, sweep target 0.9, severity mode 'marginal', verify coverage
bump 0.1). Problems raise ConfigError naming the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:  # Python >= 3.11
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

from .errors import ConfigError, ValidationError
from .population import (EconParams, EpidemicParams, PopulationModel,
                         SignalParams, default_initial_profile)

SEVERITY_MODES = ("marginal", "expected")


@dataclass(frozen=True)
class VerifyOptions:
    """Which interaction checks `verify` runs and how."""

    complementarity: bool = True
    substitutes: bool = True
    substitutes_regime: str = "-"
    coverage_bump: float = 0.1


@dataclass(frozen=True)
class SweepConfig:
    """Fully parsed run configuration shared by every subcommand.

    sigma_grid is None when the file has no sweep block; the sweep and
    suggest commands require it.
    """

    model: PopulationModel
    epidemic: EpidemicParams
    econ: EconParams
    signals: SignalParams
    initial_profile: np.ndarray
    step: float = 0.01
    sigma_grid: np.ndarray | None = None
    target_reopen_probability: float = 0.9
    severity_mode: str = "marginal"
    out: str | None = None
    verify: VerifyOptions = field(default_factory=VerifyOptions)


def _expect_table(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a table, got {type(value).__name__}")
    return value


def _require(table: dict, key: str, path: str):
    if key not in table:
        raise ConfigError(f"missing required field {path}.{key}")
    return table[key]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _real_list(value, path: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a nonempty array of numbers")
    return [_real(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _int_list(value, path: str) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a nonempty array of integers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{path}[{i}]: expected an integer, got {v!r}")
        out.append(v)
    return out


def _bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{path}: expected true/false, got {value!r}")
    return value


def _string(value, path: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {value!r}")
    return value


def _unknown_keys(table: dict, allowed: set[str], path: str) -> None:
    extra = sorted(set(table) - allowed)
    if extra:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(extra)}")


def _parse_population(table: dict) -> PopulationModel:
    path = "population"
    _unknown_keys(table, {"degrees", "degree_masses", "type_masses",
                          "joint_masses"}, path)
    degrees = _int_list(_require(table, "degrees", path), f"{path}.degrees")
    degree_masses = _real_list(_require(table, "degree_masses", path),
                               f"{path}.degree_masses")
    type_masses = _real_list(_require(table, "type_masses", path),
                             f"{path}.type_masses")
    try:
        if "joint_masses" in table:
            rows = table["joint_masses"]
            if not isinstance(rows, list):
                raise ConfigError(f"{path}.joint_masses: expected an array of rows")
            joint = [_real_list(row, f"{path}.joint_masses[{i}]")
                     for i, row in enumerate(rows)]
            return PopulationModel(tuple(degrees), np.array(degree_masses),
                                   np.array(type_masses), np.array(joint))
        return PopulationModel.independent(degrees, degree_masses, type_masses)
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_epidemic(table: dict) -> EpidemicParams:
    path = "epidemic"
    _unknown_keys(table, {"gamma", "lambda", "beta", "alpha", "horizon"}, path)
    try:
        return EpidemicParams(
            gamma=_real(_require(table, "gamma", path), f"{path}.gamma"),
            lam=_real(_require(table, "lambda", path), f"{path}.lambda"),
            beta=_real(_require(table, "beta", path), f"{path}.beta"),
            alpha=_real(_require(table, "alpha", path), f"{path}.alpha"),
            horizon=_real(_require(table, "horizon", path), f"{path}.horizon"),
        )
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_econ(table: dict, n_degrees: int) -> EconParams:
    path = "econ"
    _unknown_keys(table, {"cost_c", "risk_r", "gains"}, path)
    gains = _real_list(_require(table, "gains", path), f"{path}.gains")
    if len(gains) != n_degrees:
        raise ConfigError(
            f"{path}.gains: expected {n_degrees} entries (one per degree), "
            f"got {len(gains)}")
    try:
        return EconParams(
            cost_c=_real(_require(table, "cost_c", path), f"{path}.cost_c"),
            risk_r=_real(_require(table, "risk_r", path), f"{path}.risk_r"),
            gains=np.array(gains),
        )
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_signals(table: dict, n_types: int) -> SignalParams:
    path = "signals"
    _unknown_keys(table, {"mu", "sigma", "sigma_k"}, path)
    sigma_k = _real_list(_require(table, "sigma_k", path), f"{path}.sigma_k")
    if len(sigma_k) != n_types:
        raise ConfigError(
            f"{path}.sigma_k: expected {n_types} entries (one per type), "
            f"got {len(sigma_k)}")
    try:
        return SignalParams(
            mu=_real(_require(table, "mu", path), f"{path}.mu"),
            sigma=_real(_require(table, "sigma", path), f"{path}.sigma"),
            sigma_k=np.array(sigma_k),
        )
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_sigma_grid(value, path: str) -> np.ndarray:
    if isinstance(value, list):
        grid = np.array(_real_list(value, path))
    else:
        table = _expect_table(value, path)
        _unknown_keys(table, {"start", "stop", "points", "spacing"}, path)
        start = _real(_require(table, "start", path), f"{path}.start")
        stop = _real(_require(table, "stop", path), f"{path}.stop")
        points = _require(table, "points", path)
        if isinstance(points, bool) or not isinstance(points, int) or points < 2:
            raise ConfigError(f"{path}.points: expected an integer >= 2")
        spacing = table.get("spacing", "linear")
        if spacing == "linear":
            grid = np.linspace(start, stop, points)
        elif spacing == "log":
            if start <= 0:
                raise ConfigError(f"{path}.start: log spacing needs start > 0")
            grid = np.geomspace(start, stop, points)
        else:
            raise ConfigError(f"{path}.spacing: expected 'linear' or 'log', "
                              f"got {spacing!r}")
    if np.any(grid <= 0):
        raise ConfigError(f"{path}: grid values must be positive")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError(f"{path}: grid must be strictly increasing")
    return grid


def _parse_verify(table: dict) -> VerifyOptions:
    path = "verify"
    _unknown_keys(table, {"complementarity", "substitutes",
                          "substitutes_regime", "coverage_bump"}, path)
    opts = VerifyOptions(
        complementarity=_bool(table.get("complementarity", True),
                              f"{path}.complementarity"),
        substitutes=_bool(table.get("substitutes", True), f"{path}.substitutes"),
        substitutes_regime=_string(table.get("substitutes_regime", "-"),
                                   f"{path}.substitutes_regime"),
        coverage_bump=_real(table.get("coverage_bump", 0.1),
                            f"{path}.coverage_bump"),
    )
    if opts.substitutes_regime not in ("+", "-"):
        raise ConfigError(f"{path}.substitutes_regime: expected '+' or '-', "
                          f"got {opts.substitutes_regime!r}")
    if not 0 < opts.coverage_bump < 1:
        raise ConfigError(f"{path}.coverage_bump: expected a value in (0, 1), "
                          f"got {opts.coverage_bump!r}")
    return opts


def _load_raw(path: Path) -> dict:
    suffix = path.suffix.lower()
    if suffix == ".toml":
        try:
            with open(path, "rb") as fh:
                return _toml.load(fh)
        except _toml.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: TOML parse error: {exc}") from exc
    if suffix == ".json":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: JSON parse error at line {exc.lineno}, "
                f"column {exc.colno}: {exc.msg}") from exc
        return _expect_table(data, str(path))
    raise ConfigError(
        f"{path}: unsupported config extension {suffix!r} (use .toml or .json)")


def load_config(path) -> SweepConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = _load_raw(path)
    _unknown_keys(raw, {"population", "epidemic", "econ", "signals",
                        "initial", "scenario", "sweep", "verify"}, str(path))

    model = _parse_population(_expect_table(_require(raw, "population", str(path)),
                                            "population"))
    epidemic = _parse_epidemic(_expect_table(_require(raw, "epidemic", str(path)),
                                             "epidemic"))
    econ = _parse_econ(_expect_table(_require(raw, "econ", str(path)), "econ"),
                       len(model.degrees))
    signals = _parse_signals(_expect_table(_require(raw, "signals", str(path)),
                                           "signals"), model.n_types)

    initial_tbl = _expect_table(raw.get("initial", {}), "initial")
    _unknown_keys(initial_tbl, {"i_min", "i_max"}, "initial")
    i_min = _real(initial_tbl.get("i_min", 0.01), "initial.i_min")
    i_max = _real(initial_tbl.get("i_max", 0.05), "initial.i_max")
    if not 0 <= i_min <= i_max <= 1:
        raise ConfigError("initial: need 0 <= i_min <= i_max <= 1")
    initial_profile = default_initial_profile(model, i_min, i_max)

    scenario_tbl = _expect_table(raw.get("scenario", {}), "scenario")
    _unknown_keys(scenario_tbl, {"step"}, "scenario")
    step = _real(scenario_tbl.get("step", 0.01), "scenario.step")
    if step <= 0:
        raise ConfigError("scenario.step: must be positive")

    sigma_grid = None
    target = 0.9
    severity_mode = "marginal"
    out = None
    if "sweep" in raw:
        sweep_tbl = _expect_table(raw["sweep"], "sweep")
        _unknown_keys(sweep_tbl, {"sigma_grid", "target_reopen_probability",
                                  "severity_mode", "out"}, "sweep")
        sigma_grid = _parse_sigma_grid(_require(sweep_tbl, "sigma_grid", "sweep"),
                                       "sweep.sigma_grid")
        target = _real(sweep_tbl.get("target_reopen_probability", 0.9),
                       "sweep.target_reopen_probability")
        if not 0 < target < 1:
            raise ConfigError(
                "sweep.target_reopen_probability: must lie in (0, 1), "
                f"got {target!r}")
        severity_mode = _string(sweep_tbl.get("severity_mode", "marginal"),
                                "sweep.severity_mode")
        if severity_mode not in SEVERITY_MODES:
            raise ConfigError(
                f"sweep.severity_mode: expected one of {SEVERITY_MODES}, "
                f"got {severity_mode!r}")
        if "out" in sweep_tbl:
            out = _string(sweep_tbl["out"], "sweep.out")

    verify = _parse_verify(_expect_table(raw.get("verify", {}), "verify"))

    return SweepConfig(
        model=model,
        epidemic=epidemic,
        econ=econ,
        signals=signals,
        initial_profile=initial_profile,
        step=step,
        sigma_grid=sigma_grid,
        target_reopen_probability=target,
        severity_mode=severity_mode,
        out=out,
        verify=verify,
    )
