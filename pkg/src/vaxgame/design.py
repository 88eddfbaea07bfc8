"""Information-design conditions for reopening without an outbreak.

A degree-d group needs vaccinated share e_d = (gamma/(d lambda) - 1) /
(beta - 1) for the infection-free state to be stable after reopening. The
functions here turn that requirement into conditions on the signal
structure: the nominal threshold theta-hat the equilibrium must clear, the
certificate W(theta-hat) >= 0 as a function of the private precision, the
admissible private-precision region, a closed-form test on the public
signal (precision times mean), and bounds on the vaccination cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .normal import std_normal_cdf, std_normal_quantile
from .population import EpidemicParams, PopulationModel, SignalParams

_REFINE_TOL = 1e-8


def herd_threshold(d: int, params: EpidemicParams) -> float:
    """Vaccinated share that stabilizes the infection-free state for degree d."""
    if params.lam <= 0:
        raise DomainError("herd threshold needs a positive infection rate")
    ratio = params.gamma / (d * params.lam)
    if ratio > 1.0:
        raise DomainError(
            f"persistence fails for degree {d}: gamma/(d lambda) = {ratio:g} > 1")
    e_d = (ratio - 1.0) / (params.beta - 1.0) if params.beta < 1.0 else math.inf
    if not 0.0 < e_d < 1.0:
        raise DomainError(
            f"herd threshold for degree {d} must lie strictly inside (0, 1), "
            f"got {e_d:g} (boundary or infeasible vaccine)")
    return e_d


@dataclass(frozen=True)
class HerdThresholds:
    """Per-degree herd thresholds e_d, aligned with the degrees tuple."""

    degrees: tuple[int, ...]
    values: np.ndarray

    def __getitem__(self, d: int) -> float:
        return float(self.values[self.degrees.index(d)])


def herd_thresholds(model: PopulationModel, params: EpidemicParams) -> HerdThresholds:
    """Herd thresholds for every degree in the model."""
    values = np.array([herd_threshold(d, params) for d in model.degrees])
    return HerdThresholds(tuple(model.degrees), values)


def _threshold_curve(sigma_k, sigma: float, mu: float, cost_c: float,
                     e_d: float):
    """theta-hat as a function of the private precision (vectorized)."""
    sk = np.asarray(sigma_k, dtype=float)
    total = np.sqrt(sigma ** 2 + sk ** 2)
    q_c = std_normal_quantile(cost_c)
    q_e = std_normal_quantile(e_d)
    return mu + q_c / total + sk * q_e / (sigma * total)


def required_threshold(type_k: int, signals: SignalParams, cost_c: float,
                       e_d: float) -> float:
    """Equilibrium threshold type k must clear so its group reaches e_d.

    theta-hat = mu + Phi^-1(c)/sqrt(s2+sk2) + sigma_k Phi^-1(e_d)/(sigma sqrt(s2+sk2)).
    """
    return float(_threshold_curve(float(signals.sigma_k[type_k]), signals.sigma,
                                  signals.mu, cost_c, e_d))


def precision_threshold_curve(sigma_k: float, signals: SignalParams,
                              cost_c: float, e_d: float):
    """required_threshold as a function of a candidate private precision."""
    out = _threshold_curve(sigma_k, signals.sigma, signals.mu, cost_c, e_d)
    return float(out) if np.ndim(sigma_k) == 0 else out


def precision_stationary_point(signals: SignalParams, cost_c: float,
                               e_d: float) -> float:
    """Stationary point sigma-hat = sigma Phi^-1(e_d) / Phi^-1(c) of the curve."""
    q_c = std_normal_quantile(cost_c)
    if q_c == 0.0:
        raise DomainError("threshold curve has no stationary point at cost 0.5")
    return signals.sigma * std_normal_quantile(e_d) / q_c


def w_at_required(sigma_k, d: int, signals: SignalParams, cost_c: float,
                  params: EpidemicParams, model: PopulationModel):
    """Residual W evaluated at the required threshold for degree d.

    The candidate sigma_k is treated as the private precision shared by all
    types, so the certificate reads
        Phi((sigma Phi^-1(e_d) - sigma_k Phi^-1(c)) / sqrt(s2 + sk2))
        - theta-hat(sigma_k).
    Nonnegative values certify that the equilibrium threshold clears
    theta-hat. Vectorized over sigma_k.
    """
    e_d = herd_threshold(d, params)
    sk = np.asarray(sigma_k, dtype=float)
    sigma = signals.sigma
    total = np.sqrt(sigma ** 2 + sk ** 2)
    q_c = std_normal_quantile(cost_c)
    q_e = std_normal_quantile(e_d)
    phi_term = std_normal_cdf((sigma * q_e - sk * q_c) / total)
    value = phi_term - _threshold_curve(sk, sigma, signals.mu, cost_c, e_d)
    return float(value) if np.ndim(sigma_k) == 0 else value


@dataclass(frozen=True)
class PrecisionRegion:
    """Private-precision values certified safe for every requested degree.

    intervals: disjoint closed intervals within the searched range.
    evidence: per-interval (midpoint, certificate value at midpoint).
    infeasible_degrees: degrees whose herd threshold does not exist, with
        the reason; nonempty means the region only covers the rest.
    """

    intervals: tuple[tuple[float, float], ...]
    evidence: tuple[tuple[float, float], ...]
    infeasible_degrees: dict[int, str]
    searched: tuple[float, float]

    @property
    def has_warnings(self) -> bool:
        return bool(self.infeasible_degrees)

    def covers(self, sigma_k: float) -> bool:
        return any(lo <= sigma_k <= hi for lo, hi in self.intervals)


def _refine_boundary(w, lo: float, hi: float) -> float:
    """Bisect a sign-change bracket of w to width 1e-8."""
    w_lo = w(lo)
    for _ in range(200):
        if hi - lo <= _REFINE_TOL:
            break
        mid = 0.5 * (lo + hi)
        if (w(mid) >= 0.0) == (w_lo >= 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _nonnegative_intervals(w, grid: np.ndarray, values: np.ndarray):
    """Maximal intervals of {w >= 0} over the grid, boundaries refined."""
    keep = values >= 0.0
    intervals = []
    j = 0
    n = len(grid)
    while j < n:
        if not keep[j]:
            j += 1
            continue
        start = grid[j] if j == 0 else _refine_boundary(w, grid[j - 1], grid[j])
        while j + 1 < n and keep[j + 1]:
            j += 1
        end = grid[j] if j == n - 1 else _refine_boundary(w, grid[j], grid[j + 1])
        intervals.append((float(start), float(end)))
        j += 1
    return intervals


def _intersect(a, b):
    """Intersection of two sorted disjoint interval lists."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def private_precision_region(d_set, type_k: int, signals: SignalParams,
                             cost_c: float, params: EpidemicParams,
                             model: PopulationModel,
                             search_interval: tuple[float, float] = (1e-3, 1e3),
                             grid_size: int = 2000) -> PrecisionRegion:
    """Search private precisions whose certificate passes for every degree.

    Scans w_at_required on a logarithmic grid per degree, refines each sign
    change by bisection, and intersects the per-degree admissible sets.
    Degrees without a valid herd threshold are skipped and reported.
    """
    if type_k < 0 or type_k >= model.n_types:
        raise DomainError(f"type index {type_k} outside 0..{model.n_types - 1}")
    lo, hi = search_interval
    if not 0 < lo < hi:
        raise DomainError(f"search interval must satisfy 0 < lo < hi, got {search_interval!r}")
    grid = np.geomspace(lo, hi, grid_size)
    intervals = None
    infeasible: dict[int, str] = {}
    for d in d_set:
        try:
            herd_threshold(d, params)
        except DomainError as exc:
            infeasible[int(d)] = str(exc)
            continue
        w = lambda s, d=d: w_at_required(s, d, signals, cost_c, params, model)
        values = w_at_required(grid, d, signals, cost_c, params, model)
        d_intervals = _nonnegative_intervals(w, grid, values)
        intervals = d_intervals if intervals is None else _intersect(intervals, d_intervals)
    if intervals is None:
        raise DomainError(
            "no degree in d_set admits a herd threshold: " + "; ".join(infeasible.values()))
    evidence = []
    for a, b in intervals:
        mid = math.sqrt(a * b)
        worst = min(float(w_at_required(mid, d, signals, cost_c, params, model))
                    for d in d_set if int(d) not in infeasible)
        evidence.append((mid, worst))
    return PrecisionRegion(tuple(intervals), tuple(evidence), infeasible, (lo, hi))


def public_signal_condition(signals: SignalParams, cost_c: float,
                            herd: HerdThresholds) -> bool:
    """Closed-form sufficient condition on the public signal.

    True when sigma * mu <= min over degrees of
        min(-Phi^-1(c), -Phi^-1(e_d),
            -(1 + Phi^-1(e_d)) / sqrt(Phi^-1(c)^2 + Phi^-1(e_d)^2)),
    in which case the certificate holds for every private precision.
    """
    q_c = std_normal_quantile(cost_c)
    bound = math.inf
    for e_d in herd.values:
        q_e = std_normal_quantile(float(e_d))
        denom = math.hypot(q_c, q_e)
        terms = [-q_c, -q_e]
        if denom > 0:
            terms.append(-(1.0 + q_e) / denom)
        bound = min(bound, min(terms))
    return signals.sigma * signals.mu <= bound


@dataclass(frozen=True)
class CostBounds:
    """Vaccination-cost interval implied by the public-signal condition."""

    lower: float
    upper: float
    consistent: bool


def cost_bounds(signals: SignalParams, e_d: float) -> CostBounds:
    """Cost interval [Phi(-sqrt((1+q_e^2)/(sigma mu)^2 - q_e^2)), Phi(-sigma mu)].

    Raises DomainError when the radicand is negative; flags inconsistency
    when the bounds cross.
    """
    if not 0 < e_d < 1:
        raise DomainError(f"e_d must lie in (0, 1), got {e_d!r}")
    sm = signals.sigma * signals.mu
    q_e = std_normal_quantile(e_d)
    radicand = (1.0 + q_e ** 2) / sm ** 2 - q_e ** 2
    if radicand < 0:
        raise DomainError(
            f"cost lower bound undefined: radicand {radicand:g} < 0 for sigma*mu = {sm:g}")
    lower = std_normal_cdf(-math.sqrt(radicand))
    upper = std_normal_cdf(-sm)
    return CostBounds(lower, upper, lower <= upper)
