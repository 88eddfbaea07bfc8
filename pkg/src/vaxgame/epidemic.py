"""Degree-based mean-field infection dynamics and steady states.

Within regime s ('+' reopened, '-' restricted) each (d, k, i) group evolves
as

    dI/dt = -gamma * I + lambda_i * (1 - I) * alpha_s * d * Theta(t),

where lambda_1 = beta * lambda_0, alpha_- = alpha < 1 = alpha_+, and
Theta(t) is the degree-weighted average infection across all groups. The
integrator is classical fixed-step RK4 with an automatic step-halving retry
when a step leaves [0, 1] by more than the overshoot tolerance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import IntegrationError, SolverError
from .population import (EpidemicParams, Partition, PopulationModel,
                         validate_profile)

#: entries may exit [0, 1] by at most this much before a step counts as unstable
OVERSHOOT_TOL = 1e-9
_REGIMES = ("+", "-")
_MAX_STEP_HALVINGS = 4

_FP_MAX_ITER = 5000
_FP_DAMPING = 0.5
_STEADY_RESIDUAL = 1e-10


def _check_regime(regime: str) -> None:
    if regime not in _REGIMES:
        raise ValueError(f"regime must be '+' or '-', got {regime!r}")


def _contact_factor(regime: str, params: EpidemicParams) -> float:
    return 1.0 if regime == "+" else params.alpha


@dataclass(frozen=True)
class Trajectory:
    """Integration output on a uniform grid covering [0, horizon]."""

    regime: str
    times: np.ndarray            # (N+1,)
    profiles: np.ndarray         # (N+1, D, K, 2)
    theta: np.ndarray            # (N+1,), aggregate recomputable from profiles
    step: float


def theta_aggregate(profile: np.ndarray, model: PopulationModel,
                    partition: Partition) -> float:
    """Degree-weighted average infection sum d * m^{d,k}_i * I / mean degree."""
    profile = validate_profile(profile, model)
    partition.validate(model)
    degrees = np.asarray(model.degrees, dtype=float)[:, None, None]
    return float((degrees * partition.masses * profile).sum() / model.mean_degree())


def integrate(regime: str, params: EpidemicParams, model: PopulationModel,
              partition: Partition, initial: np.ndarray,
              step: float = 0.01) -> Trajectory:
    """Integrate the group infection system over [0, params.horizon].

    Returns the whole trajectory on the uniform grid. If a step pushes any
    share outside [0, 1] beyond the overshoot tolerance, the integration
    restarts with the step halved (a few times) before giving up.
    """
    _check_regime(regime)
    initial = validate_profile(initial, model)
    partition.validate(model)
    if step <= 0:
        raise ValueError(f"step must be positive, got {step!r}")

    shape = initial.shape
    degrees = np.asarray(model.degrees, dtype=float)[:, None, None]
    # theta weights and per-group infection coefficients, flattened
    weights = (degrees * partition.masses / model.mean_degree()).ravel()
    lam = np.array([params.lam, params.lam * params.beta])
    coef = (_contact_factor(regime, params)
            * np.broadcast_to(lam, shape) * np.broadcast_to(degrees, shape)).ravel()
    gamma = params.gamma
    y0 = initial.ravel().copy()

    def rhs(y: np.ndarray) -> np.ndarray:
        return -gamma * y + coef * (1.0 - y) * weights.dot(y)

    attempt = step
    for _ in range(_MAX_STEP_HALVINGS + 1):
        n_steps = max(1, ceil(params.horizon / attempt - 1e-12))
        h = params.horizon / n_steps
        states = np.empty((n_steps + 1, y0.size))
        states[0] = y0
        y = y0.copy()
        stable = True
        for n in range(n_steps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if y.min() < -OVERSHOOT_TOL or y.max() > 1.0 + OVERSHOOT_TOL:
                stable = False
                break
            np.clip(y, 0.0, 1.0, out=y)
            states[n + 1] = y
        if stable:
            times = np.linspace(0.0, params.horizon, n_steps + 1)
            profiles = states.reshape((n_steps + 1,) + shape)
            theta = states.dot(weights)
            return Trajectory(regime, times, profiles, theta, h)
        attempt *= 0.5
    raise IntegrationError(
        f"integration left [0, 1] even at step {attempt * 2:g}; use a smaller step")


def terminal_profile(trajectory: Trajectory) -> np.ndarray:
    """Infection profile at the horizon."""
    return trajectory.profiles[-1]


@dataclass(frozen=True)
class SteadyState:
    """Stationary point of the infection system for a fixed partition."""

    regime: str
    theta: float
    profile: np.ndarray          # (D, K, 2)
    residual: float
    converged: bool


def steady_state(regime: str, params: EpidemicParams, model: PopulationModel,
                 partition: Partition) -> SteadyState:
    """Largest stationary aggregate in [0, 1) and the implied profile.

    Theta solves Theta = F(Theta) with
    F(Theta) = sum_j w_j * c_j Theta / (gamma + c_j Theta); each group then
    sits at I_j = c_j Theta / (gamma + c_j Theta). F is increasing and
    concave, so a positive fixed point exists exactly when F'(0) > 1; below
    that threshold the infection-free state is the only one.
    """
    _check_regime(regime)
    partition.validate(model)
    shape = partition.masses.shape
    degrees = np.asarray(model.degrees, dtype=float)[:, None, None]
    weights = (degrees * partition.masses / model.mean_degree()).ravel()
    lam = np.array([params.lam, params.lam * params.beta])
    coef = (_contact_factor(regime, params)
            * np.broadcast_to(lam, shape) * np.broadcast_to(degrees, shape)).ravel()
    gamma = params.gamma

    def fmap(theta: float) -> float:
        ct = coef * theta
        return float(np.dot(weights, ct / (gamma + ct)))

    slope0 = float(np.dot(weights, coef)) / gamma
    if slope0 <= 1.0 + 1e-13:
        profile = np.zeros(shape)
        return SteadyState(regime, 0.0, profile, 0.0, True)

    # damped fixed-point iteration, seeded at the single-degree endemic level
    guess = 1.0 - gamma / (params.lam * max(model.degrees)) if params.lam > 0 else 0.5
    theta = min(max(guess, 1e-6), 1.0 - 1e-6)
    converged = False
    for _ in range(_FP_MAX_ITER):
        nxt = (1.0 - _FP_DAMPING) * theta + _FP_DAMPING * fmap(theta)
        if abs(nxt - theta) < 1e-14:
            theta = nxt
            converged = True
            break
        theta = nxt
    if not converged or abs(fmap(theta) - theta) > _STEADY_RESIDUAL:
        # bisection fallback on G(t) = F(t) - t over (1e-12, 1)
        lo, hi = 1e-12, 1.0
        if fmap(lo) - lo <= 0:
            raise SolverError(
                f"no positive stationary point found (residual {abs(fmap(theta) - theta):.3e})")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if fmap(mid) - mid > 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        theta = 0.5 * (lo + hi)
    residual = abs(fmap(theta) - theta)
    if residual > _STEADY_RESIDUAL:
        raise SolverError(f"stationary point iteration stalled at residual {residual:.3e}")
    ct = coef * theta
    profile = (ct / (gamma + ct)).reshape(shape)
    return SteadyState(regime, theta, profile, residual, True)


def steady_severity(state: SteadyState, partition: Partition) -> float:
    """Population-average stationary infection sum m^{d,k}_i * I^{d,k}_i."""
    return float((partition.masses * state.profile).sum())


def disease_free_stable(params: EpidemicParams, model: PopulationModel,
                        partition: Partition) -> bool:
    """Reopened-regime stability certificate for the infection-free state.

    True when sum_{d,k,i} d^2 lambda_i m^{d,k}_i / gamma <= mean degree,
    which makes the weighted-sum Lyapunov function decay.
    """
    partition.validate(model)
    shape = partition.masses.shape
    degrees = np.asarray(model.degrees, dtype=float)[:, None, None]
    lam = np.array([params.lam, params.lam * params.beta])
    lhs = float((np.broadcast_to(degrees, shape) ** 2
                 * np.broadcast_to(lam, shape) * partition.masses).sum()) / params.gamma
    return lhs <= model.mean_degree()


def persistence_check(params: EpidemicParams, model: PopulationModel) -> bool:
    """True when gamma <= d * lambda for every degree present."""
    return all(params.gamma <= d * params.lam for d in model.degrees)


def write_trajectory_csv(trajectory: Trajectory, model: PopulationModel, path) -> None:
    """Write a trajectory as CSV: t, regime, one I column per (d, k, i), theta.

    Columns are named I_d{d}_k{k}_a{i} with types numbered from 1, sorted by
    (d, k, i). Floats carry 12 significant digits.
    """
    n_d, n_k = len(model.degrees), model.n_types
    header = ["t", "regime"]
    header += [f"I_d{model.degrees[di]}_k{ki + 1}_a{ai}"
               for di in range(n_d) for ki in range(n_k) for ai in (0, 1)]
    header.append("theta")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        flat = trajectory.profiles.reshape(len(trajectory.times), -1)
        for n, t in enumerate(trajectory.times):
            row = [f"{t:.12g}", trajectory.regime]
            row += [f"{v:.12g}" for v in flat[n]]
            row.append(f"{trajectory.theta[n]:.12g}")
            writer.writerow(row)
