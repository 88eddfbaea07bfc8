"""Signal-threshold equilibrium of the vaccination game.

The fundamental theta ~ N(mu, 1/sigma^2) is the coverage level above which
restrictions stay in place; type-k players observe x_k = theta + xi_k with
xi_k ~ N(0, 1/sigma_k^2) and vaccinate below a critical signal x*_k. The
equilibrium threshold theta* is the coverage realized exactly at the
regime boundary, found as the root of the residual

    W(theta) = sum_k m^k Phi((sqrt(s2 + sk2) q_c + s2 mu - s2 theta) / -s_k)
               - theta,

which is strictly decreasing whenever the uniqueness condition
sum_k m^k / sigma_k <= sqrt(2 pi) / sigma^2 holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .normal import std_normal_cdf, std_normal_pdf, std_normal_quantile
from .population import Partition, PopulationModel, SignalParams

#: default dense-scan resolution when multiple roots are possible
GRID_POINTS = 100_000
_EDGE = 1e-9


def uniqueness_condition(model: PopulationModel, signals: SignalParams) -> bool:
    """True when sum_k m^k / sigma_k <= sqrt(2 pi) / sigma^2."""
    lhs = float(np.dot(model.type_masses, 1.0 / signals.sigma_k))
    return lhs <= math.sqrt(2.0 * math.pi) / signals.sigma ** 2


def critical_signals(theta_star: float, signals: SignalParams,
                     cost_c: float) -> np.ndarray:
    """Per-type critical signal x*_k making the posterior hit the cost."""
    s2 = signals.sigma ** 2
    sk2 = signals.sigma_k ** 2
    q_c = std_normal_quantile(cost_c)
    return (np.sqrt(s2 + sk2) * q_c + s2 * signals.mu
            - (s2 + sk2) * theta_star) / (-sk2)


def posterior_reopen_probability(theta_star: float, x: float, type_k: int,
                                 signals: SignalParams) -> float:
    """P(theta <= theta* | x_k = x) under the Gaussian posterior."""
    s2 = signals.sigma ** 2
    sk2 = float(signals.sigma_k[type_k]) ** 2
    total = s2 + sk2
    return std_normal_cdf(math.sqrt(total)
                          * (theta_star - (sk2 * x + s2 * signals.mu) / total))


def average_action(theta: float, x_star: np.ndarray, model: PopulationModel,
                   signals: SignalParams) -> float:
    """Vaccinated share at realization theta: sum_k m^k Phi(sigma_k (x*_k - theta))."""
    probs = std_normal_cdf(signals.sigma_k * (x_star - theta))
    return float(np.dot(model.type_masses, probs))


def threshold_residual(theta, model: PopulationModel, signals: SignalParams,
                       cost_c: float):
    """W(theta): coverage implied by cutoff play at theta, minus theta.

    Accepts a scalar or an array of theta values.
    """
    s2 = signals.sigma ** 2
    q_c = std_normal_quantile(cost_c)
    theta_arr = np.asarray(theta, dtype=float)
    args = (np.sqrt(s2 + signals.sigma_k ** 2) * q_c
            + s2 * (signals.mu - theta_arr[..., None])) / (-signals.sigma_k)
    value = std_normal_cdf(args).dot(model.type_masses) - theta_arr
    return float(value) if theta_arr.ndim == 0 else value


@dataclass(frozen=True)
class EquilibriumResult:
    """Threshold equilibrium: theta*, critical signals, and root diagnostics."""

    theta_star: float
    x_star: np.ndarray
    unique: bool                      # Eq.-3-style uniqueness condition held
    roots_found: tuple[float, ...]    # all residual roots detected in (0, 1)
    residual: float


def _bisect_root(w, lo: float, hi: float, tol: float) -> float:
    """Bisection on a bracket with w(lo) > 0 > w(hi)."""
    width_goal = min(tol, 1e-13)
    for _ in range(250):
        mid = 0.5 * (lo + hi)
        if hi - lo <= width_goal:
            return mid
        if w(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_threshold(model: PopulationModel, signals: SignalParams, cost_c: float,
                    tol: float = 1e-12, grid_points: int = GRID_POINTS) -> EquilibriumResult:
    """Solve W(theta) = 0 on (0, 1).

    Under the uniqueness condition the single bracket (1e-9, 1 - 1e-9) is
    bisected directly. Otherwise W is scanned on a dense grid, every
    sign-change bracket is bisected, all roots are reported, and the
    smallest is the canonical threshold.
    """
    if not 0 < cost_c < 1:
        raise SolverError(f"cost must lie in (0, 1), got {cost_c!r}")
    w = lambda t: threshold_residual(t, model, signals, cost_c)
    unique = uniqueness_condition(model, signals)
    if unique:
        lo, hi = _EDGE, 1.0 - _EDGE
        w_lo, w_hi = w(lo), w(hi)
        if not (w_lo > 0.0 > w_hi):
            raise SolverError(
                f"no sign change of the threshold residual on ({lo:g}, {hi:g}): "
                f"W({lo:g}) = {w_lo:.3e}, W({hi:g}) = {w_hi:.3e}")
        root = _bisect_root(w, lo, hi, tol)
        roots = (root,)
    else:
        grid = np.concatenate(([_EDGE], np.linspace(1e-6, 1.0 - 1e-6, grid_points),
                               [1.0 - _EDGE]))
        values = threshold_residual(grid, model, signals, cost_c)
        roots_list = []
        sign = np.sign(values)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        for j in flips:
            if values[j] > 0 > values[j + 1]:
                roots_list.append(_bisect_root(w, grid[j], grid[j + 1], tol))
            else:
                wn = lambda t: -w(t)
                roots_list.append(_bisect_root(wn, grid[j], grid[j + 1], tol))
        roots_list += [float(grid[j]) for j in np.nonzero(sign == 0)[0]]
        if not roots_list:
            raise SolverError(
                f"no sign change of the threshold residual on ({_EDGE:g}, {1 - _EDGE:g}); "
                "check the signal and cost parameters")
        roots = tuple(sorted(roots_list))
    theta_star = roots[0]
    return EquilibriumResult(theta_star=theta_star,
                             x_star=critical_signals(theta_star, signals, cost_c),
                             unique=unique, roots_found=roots,
                             residual=abs(w(theta_star)))


def ne_partition(theta: float, x_star: np.ndarray, model: PopulationModel,
                 signals: SignalParams) -> Partition:
    """Partition realized at theta when type k vaccinates below x*_k."""
    probs = std_normal_cdf(signals.sigma_k * (x_star - theta))
    return Partition.from_fractions(model, probs[None, :])


def reopening_probability(theta_star: float, signals: SignalParams) -> float:
    """P(theta <= theta*) = Phi(sigma (theta* - mu))."""
    return std_normal_cdf(signals.sigma * (theta_star - signals.mu))


def limit_threshold(l: float, cost_c: float, mu: float, model: PopulationModel,
                    tol: float = 1e-12, mu_zero: bool = False) -> float:
    """Threshold in the high-precision limit at fixed ratio l = sigma^2 / sigma_k.

    Solves theta = sum_k m^k Phi(l theta - l mu + Phi^-1(c)); with mu_zero
    the nominal threshold is dropped. The ratio is shared by every type, so
    the type masses sum out of the map; the model argument is kept for
    interface symmetry. The smallest root is returned when the map admits
    several.
    """
    if l < 0:
        raise SolverError(f"precision ratio must be nonnegative, got {l!r}")
    q_c = std_normal_quantile(cost_c)
    shift = 0.0 if mu_zero else l * mu

    def h(theta):
        return std_normal_cdf(l * np.asarray(theta, dtype=float) - shift + q_c) - theta

    grid = np.linspace(_EDGE, 1.0 - _EDGE, 10_001)
    values = h(grid)
    exact = np.nonzero(values == 0.0)[0]
    sign = np.sign(values)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(exact) and (len(flips) == 0 or exact[0] <= flips[0]):
        return float(grid[exact[0]])
    if len(flips) == 0:
        raise SolverError("no sign change of the limit map on (0, 1)")
    j = flips[0]
    if values[j] > 0:
        return _bisect_root(lambda t: float(h(t)), grid[j], grid[j + 1], tol)
    return _bisect_root(lambda t: -float(h(t)), grid[j], grid[j + 1], tol)


def threshold_mu_sensitivity(theta_star: float, l: float, cost_c: float,
                             mu: float, model: PopulationModel) -> float:
    """Derivative of the limit threshold with respect to the nominal mean mu.

    theta_star must be the limit fixed point at (l, cost_c, mu). Implicit
    differentiation of that fixed point gives S / (S - 1) with
    S = sum_k m^k phi(l theta* - l mu + Phi^-1(c)) * l, matching central
    finite differences of limit_threshold.
    """
    q_c = std_normal_quantile(cost_c)
    s = std_normal_pdf(l * theta_star - l * mu + q_c) * l
    if abs(s - 1.0) < 1e-12:
        raise SolverError(f"sensitivity denominator is singular (S = {s!r})")
    return s / (s - 1.0)
