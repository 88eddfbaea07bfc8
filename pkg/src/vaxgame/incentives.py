"""Regime-dependent payoffs and the strategic-interaction checks.

Payoffs per (degree, type, regime, action) are assembled from terminal
infection shares: staying open under the restricted regime yields
-r * I(T); reopening adds the per-degree gain g_d; vaccinating costs c in
either regime. Two falsifiable checks probe how the vaccination incentive
moves with others' choices:

* complementarity_check — with regime switching in play, the incentive gap
  under reopening should weakly dominate the gap under restriction
  (decisions reinforce each other), provided the reopened aggregate
  exposure stays above alpha times the restricted one.
* substitutes_check — within a single fixed regime, raising coverage
  should weakly shrink every group's incentive gap (free-riding).

Both return reports carrying the evidence, including counterexamples when
the property fails; they never assert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .population import (EconParams, EpidemicParams, Partition,
                         PopulationModel, validate_profile)
from .epidemic import Trajectory, integrate, terminal_profile

_GAP_TOL = 1e-9

_REGIME_AXIS = {"-": 0, "+": 1}


@dataclass(frozen=True)
class PayoffTable:
    """Terminal payoffs indexed as values[d, k, regime, action].

    The regime axis is ordered (restricted '-', reopened '+'); the action
    axis is (stay open, vaccinate).
    """

    values: np.ndarray

    def gap(self, regime: str) -> np.ndarray:
        """Per-(degree, type) incentive gap u_1 - u_0 within one regime."""
        sliced = self.values[:, :, _REGIME_AXIS[regime], :]
        return sliced[:, :, 1] - sliced[:, :, 0]


def _check_same_grouping(traj_plus: Trajectory, traj_minus: Trajectory) -> None:
    if traj_plus.profiles.shape[1:] != traj_minus.profiles.shape[1:]:
        raise ValidationError(
            f"trajectories group shapes differ: {traj_plus.profiles.shape[1:]} "
            f"vs {traj_minus.profiles.shape[1:]}")
    if abs(traj_plus.times[-1] - traj_minus.times[-1]) > 1e-12:
        raise ValidationError(
            f"trajectories cover different horizons: {traj_plus.times[-1]!r} "
            f"vs {traj_minus.times[-1]!r}")


def payoffs(traj_plus: Trajectory, traj_minus: Trajectory,
            econ: EconParams) -> PayoffTable:
    """Assemble the payoff table from the two regimes' terminal profiles.

    u[d,k,'-',i] = -c*[i=1] - r*I_terminal
    u[d,k,'+',i] = -c*[i=1] - r*I_terminal + g_d
    """
    if traj_plus.regime != "+" or traj_minus.regime != "-":
        raise ValidationError(
            f"expected regimes ('+', '-'), got ({traj_plus.regime!r}, "
            f"{traj_minus.regime!r})")
    _check_same_grouping(traj_plus, traj_minus)
    term_plus = terminal_profile(traj_plus)    # (D, K, 2)
    term_minus = terminal_profile(traj_minus)
    n_deg, n_typ = term_plus.shape[:2]
    if econ.gains.shape != (n_deg,):
        raise ValidationError(
            f"gains shape {econ.gains.shape} does not match {n_deg} degrees")
    cost = np.array([0.0, econ.cost_c])
    values = np.empty((n_deg, n_typ, 2, 2))
    values[:, :, 0, :] = -cost - econ.risk_r * term_minus
    values[:, :, 1, :] = -cost - econ.risk_r * term_plus \
        + econ.gains[:, None, None]
    return PayoffTable(values)


def payoff_gaps(traj: Trajectory, econ: EconParams) -> np.ndarray:
    """Incentive gap u_1 - u_0 per (degree, type) from a single trajectory.

    The per-degree gain enters both actions equally, so the gap reduces to
    r * (I_0(T) - I_1(T)) - c regardless of regime.
    """
    term = terminal_profile(traj)
    return econ.risk_r * (term[:, :, 0] - term[:, :, 1]) - econ.cost_c


def _first_violation(mask: np.ndarray):
    """Index tuple of the first True entry, or None."""
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if idx.size else None


@dataclass(frozen=True)
class IncentiveReport:
    """Outcome of the regime-switching complementarity check.

    premise_holds is the grid evaluation of theta_plus >= alpha*theta_minus;
    complementarity_holds compares gaps componentwise at tolerance 1e-9.
    Counterexample fields are None when the corresponding check passes.
    """

    premise_holds: bool
    premise_counterexample: tuple[float, float, float] | None
    gaps_plus: np.ndarray
    gaps_minus: np.ndarray
    complementarity_holds: bool
    counterexample: tuple[int, int] | None

    def summary_lines(self, model: PopulationModel) -> list[str]:
        lines = [
            f"premise theta+ >= alpha*theta-: {'holds' if self.premise_holds else 'FAILS'}",
        ]
        if self.premise_counterexample is not None:
            t, tp, atm = self.premise_counterexample
            lines.append(f"  first violation at t={t:g}: theta+={tp:.6g} < {atm:.6g}")
        lines.append("complementarity (gap+ >= gap-): "
                     + ("holds" if self.complementarity_holds else "FAILS"))
        for di, d in enumerate(model.degrees):
            for k in range(model.n_types):
                lines.append(
                    f"  d={d} k={k + 1}: gap+ = {self.gaps_plus[di, k]: .6e}, "
                    f"gap- = {self.gaps_minus[di, k]: .6e}")
        if self.counterexample is not None:
            di, k = self.counterexample
            lines.append(f"  first violating group: d={model.degrees[di]} k={k + 1}")
        return lines


def _check_profile_hypothesis(initial: np.ndarray, model: PopulationModel) -> None:
    """Prop.-style hypothesis: weakly increasing in degree, type-independent."""
    arr = validate_profile(initial, model)
    if not np.allclose(arr, arr[:, :1, :1], atol=1e-12):
        raise ValidationError(
            "initial profile must not vary across types or actions")
    levels = arr[:, 0, 0]
    if np.any(np.diff(levels) < -1e-12):
        raise ValidationError(
            "initial profile must be weakly increasing in degree")


def complementarity_check(params: EpidemicParams, econ: EconParams,
                          model: PopulationModel, partition: Partition,
                          initial: np.ndarray,
                          step: float = 0.01) -> IncentiveReport:
    """Integrate both regimes from one initial profile and compare gaps.

    Reports whether the reopened-regime incentive gap weakly dominates the
    restricted-regime gap in every group, alongside whether the aggregate
    exposure premise held on the shared grid. A failed premise does not
    suppress the gaps; it flags the report.
    """
    _check_profile_hypothesis(initial, model)
    traj_plus = integrate("+", params, model, partition, initial, step=step)
    traj_minus = integrate("-", params, model, partition, initial, step=step)

    slack = traj_plus.theta - params.alpha * traj_minus.theta
    premise_bad = _first_violation(slack < -_GAP_TOL)
    premise_counter = None
    if premise_bad is not None:
        j = premise_bad[0]
        premise_counter = (float(traj_plus.times[j]), float(traj_plus.theta[j]),
                           float(params.alpha * traj_minus.theta[j]))

    gaps_plus = payoff_gaps(traj_plus, econ)
    gaps_minus = payoff_gaps(traj_minus, econ)
    violation = _first_violation(gaps_plus < gaps_minus - _GAP_TOL)
    return IncentiveReport(
        premise_holds=premise_bad is None,
        premise_counterexample=premise_counter,
        gaps_plus=gaps_plus,
        gaps_minus=gaps_minus,
        complementarity_holds=violation is None,
        counterexample=violation,
    )


def bump_partition(partition: Partition, coverage_bump: float) -> Partition:
    """Move coverage_bump of total mass from action 0 to action 1.

    The transfer is proportional to each group's unvaccinated mass, so the
    degree/type mix of the unvaccinated pool is preserved.
    """
    if coverage_bump <= 0:
        raise DomainError(f"coverage_bump must be positive, got {coverage_bump!r}")
    unvacc = partition.masses[:, :, 0]
    total = float(unvacc.sum())
    if coverage_bump > total + 1e-15:
        raise DomainError(
            f"coverage_bump {coverage_bump!r} exceeds unvaccinated mass {total:g}")
    scale = min(coverage_bump / total, 1.0)
    moved = unvacc * scale
    masses = np.stack([unvacc - moved, partition.masses[:, :, 1] + moved], axis=-1)
    return Partition(masses)


@dataclass(frozen=True)
class SubstitutesReport:
    """Outcome of the fixed-regime substitutes check.

    decreasing_holds evaluates gap(bumped) <= gap(base) + 1e-9 per group.
    """

    regime: str
    base_coverage: float
    bumped_coverage: float
    base_gaps: np.ndarray
    bumped_gaps: np.ndarray
    decreasing_holds: bool
    counterexample: tuple[int, int] | None

    def summary_lines(self, model: PopulationModel) -> list[str]:
        lines = [
            f"regime '{self.regime}', coverage {self.base_coverage:.6g} -> "
            f"{self.bumped_coverage:.6g}",
            "substitutes (gaps weakly decrease): "
            + ("holds" if self.decreasing_holds else "FAILS"),
        ]
        for di, d in enumerate(model.degrees):
            for k in range(model.n_types):
                lines.append(
                    f"  d={d} k={k + 1}: gap = {self.base_gaps[di, k]: .6e} -> "
                    f"{self.bumped_gaps[di, k]: .6e}")
        if self.counterexample is not None:
            di, k = self.counterexample
            lines.append(f"  first violating group: d={model.degrees[di]} k={k + 1}")
        return lines


def substitutes_check(regime: str, params: EpidemicParams, econ: EconParams,
                      model: PopulationModel, base_partition: Partition,
                      coverage_bump: float, initial: np.ndarray,
                      step: float = 0.01) -> SubstitutesReport:
    """Compare incentive gaps at base coverage and after a coverage bump.

    Holding the regime fixed, integrates the system under both partitions
    and reports whether every group's gap weakly decreased.
    """
    bumped = bump_partition(base_partition, coverage_bump)
    base_gaps = payoff_gaps(
        integrate(regime, params, model, base_partition, initial, step=step), econ)
    bumped_gaps = payoff_gaps(
        integrate(regime, params, model, bumped, initial, step=step), econ)
    violation = _first_violation(bumped_gaps > base_gaps + _GAP_TOL)
    return SubstitutesReport(
        regime=regime,
        base_coverage=base_partition.coverage(),
        bumped_coverage=bumped.coverage(),
        base_gaps=base_gaps,
        bumped_gaps=bumped_gaps,
        decreasing_holds=violation is None,
        counterexample=violation,
    )
