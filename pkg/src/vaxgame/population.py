"""Population structure and parameter containers.

A population is grouped by network degree d and information type k; within
each (d, k) group a mass of players has committed to action i = 1
(vaccinate) or i = 0 (abstain). All masses are fractions of the whole
population, so every full summation equals one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError

_MASS_TOL = 1e-12


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class PopulationModel:
    """Degree/type structure: marginals and the joint mass table.

    degrees: strictly increasing positive integers.
    degree_masses: m^d, one per degree, summing to one.
    type_masses: m^k, one per type, summing to one.
    joint_masses: m^{d,k} with shape (len(degrees), len(type_masses));
        rows/columns must reproduce the marginals.
    """

    degrees: tuple[int, ...]
    degree_masses: np.ndarray
    type_masses: np.ndarray
    joint_masses: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "degree_masses",
                           _as_float_array(self.degree_masses, "degree_masses"))
        object.__setattr__(self, "type_masses",
                           _as_float_array(self.type_masses, "type_masses"))
        object.__setattr__(self, "joint_masses",
                           _as_float_array(self.joint_masses, "joint_masses"))
        self.validate()

    def validate(self) -> None:
        """Check every structural invariant; raise ValidationError otherwise."""
        if len(self.degrees) == 0:
            raise ValidationError("at least one degree is required")
        if any(d < 1 for d in self.degrees):
            raise ValidationError(f"degrees must be positive integers, got {self.degrees}")
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValidationError(f"degrees must be strictly increasing, got {self.degrees}")
        if self.degree_masses.shape != (len(self.degrees),):
            raise ValidationError("degree_masses must have one entry per degree")
        if self.type_masses.ndim != 1 or len(self.type_masses) == 0:
            raise ValidationError("type_masses must be a non-empty vector")
        if self.joint_masses.shape != (len(self.degrees), len(self.type_masses)):
            raise ValidationError(
                f"joint_masses shape {self.joint_masses.shape} does not match "
                f"{len(self.degrees)} degrees x {len(self.type_masses)} types")
        for name, arr in (("degree_masses", self.degree_masses),
                          ("type_masses", self.type_masses),
                          ("joint_masses", self.joint_masses)):
            if np.any(arr < 0):
                raise ValidationError(f"{name} must be nonnegative")
            if abs(arr.sum() - 1.0) > _MASS_TOL:
                raise ValidationError(f"{name} must sum to 1, got {arr.sum()!r}")
        if np.max(np.abs(self.joint_masses.sum(axis=1) - self.degree_masses)) > _MASS_TOL:
            raise ValidationError("joint_masses rows do not reproduce the degree margin")
        if np.max(np.abs(self.joint_masses.sum(axis=0) - self.type_masses)) > _MASS_TOL:
            raise ValidationError("joint_masses columns do not reproduce the type margin")

    @property
    def n_types(self) -> int:
        return len(self.type_masses)

    def mean_degree(self) -> float:
        """Average degree sum_d d * m^d."""
        return float(np.dot(self.degrees, self.degree_masses))

    @staticmethod
    def independent(degrees: Sequence[int], degree_masses, type_masses) -> "PopulationModel":
        """Build a model whose joint is the product of the marginals."""
        dm = _as_float_array(degree_masses, "degree_masses")
        tm = _as_float_array(type_masses, "type_masses")
        return PopulationModel(tuple(degrees), dm, tm, np.outer(dm, tm))


def renormalized(degrees: Sequence[int], degree_masses, type_masses,
                 joint_masses=None) -> PopulationModel:
    """Build a model after scaling each mass table to sum to one.

    Renormalization happens only through this explicit entry point;
    constructors reject masses that do not already sum to one.
    """
    dm = _as_float_array(degree_masses, "degree_masses")
    tm = _as_float_array(type_masses, "type_masses")
    if np.any(dm < 0) or np.any(tm < 0):
        raise ValidationError("masses must be nonnegative")
    if dm.sum() <= 0 or tm.sum() <= 0:
        raise ValidationError("mass tables must have positive total mass")
    dm = dm / dm.sum()
    tm = tm / tm.sum()
    if joint_masses is None:
        return PopulationModel(tuple(degrees), dm, tm, np.outer(dm, tm))
    jm = _as_float_array(joint_masses, "joint_masses")
    if np.any(jm < 0) or jm.sum() <= 0:
        raise ValidationError("joint_masses must be nonnegative with positive total")
    jm = jm / jm.sum()
    dm = jm.sum(axis=1)
    tm = jm.sum(axis=0)
    return PopulationModel(tuple(degrees), dm, tm, jm)


@dataclass(frozen=True)
class Partition:
    """Action commitment masses m^{d,k}_i, shape (degrees, types, 2).

    The last axis indexes the action: 0 = abstain, 1 = vaccinate.
    """

    masses: np.ndarray

    def __post_init__(self):
        arr = _as_float_array(self.masses, "partition masses")
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValidationError(f"partition masses must have shape (D, K, 2), got {arr.shape}")
        if np.any(arr < -_MASS_TOL):
            raise ValidationError("partition masses must be nonnegative")
        object.__setattr__(self, "masses", np.clip(arr, 0.0, None))

    def validate(self, model: PopulationModel) -> None:
        """Check consistency against a model's joint masses."""
        if self.masses.shape[:2] != model.joint_masses.shape:
            raise ValidationError(
                f"partition shape {self.masses.shape[:2]} does not match model "
                f"{model.joint_masses.shape}")
        if np.max(np.abs(self.masses.sum(axis=2) - model.joint_masses)) > 1e-9:
            raise ValidationError("partition group sums do not reproduce the joint masses")

    def coverage(self) -> float:
        """Total vaccinated mass sum_{d,k} m^{d,k}_1."""
        return float(self.masses[:, :, 1].sum())

    @staticmethod
    def from_fractions(model: PopulationModel, vaccinated_fraction) -> "Partition":
        """Split each (d, k) group with the given vaccinated fraction.

        vaccinated_fraction may be a scalar, a per-type vector, or a full
        (D, K) table; entries must lie in [0, 1].
        """
        frac = np.broadcast_to(np.asarray(vaccinated_fraction, dtype=float),
                               model.joint_masses.shape)
        if np.any(frac < 0) or np.any(frac > 1):
            raise ValidationError("vaccinated fractions must lie in [0, 1]")
        masses = np.stack([model.joint_masses * (1.0 - frac),
                           model.joint_masses * frac], axis=2)
        return Partition(masses)


@dataclass(frozen=True)
class EpidemicParams:
    """Infection dynamics: recovery gamma, base rate lambda, vaccine factor
    beta, restricted-regime contact factor alpha, horizon T."""

    gamma: float
    lam: float
    beta: float
    alpha: float
    horizon: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValidationError(f"gamma must be positive, got {self.gamma!r}")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValidationError(f"lambda must be nonnegative, got {self.lam!r}")
        if not (np.isfinite(self.beta) and 0 < self.beta <= 1):
            raise ValidationError(f"beta must lie in (0, 1], got {self.beta!r}")
        if not (np.isfinite(self.alpha) and 0 < self.alpha < 1):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise ValidationError(f"horizon must be positive, got {self.horizon!r}")

    def rate(self, action: int) -> float:
        """Per-contact infection rate lambda_i (vaccination scales by beta)."""
        return self.lam * self.beta if action == 1 else self.lam


@dataclass(frozen=True)
class EconParams:
    """Payoff ingredients: vaccination cost, infection risk weight, and the
    per-degree reopening gain."""

    cost_c: float
    risk_r: float
    gains: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.cost_c) and 0 < self.cost_c < 1):
            raise ValidationError(f"cost_c must lie in (0, 1), got {self.cost_c!r}")
        if not (np.isfinite(self.risk_r) and self.risk_r >= 0):
            raise ValidationError(f"risk_r must be nonnegative, got {self.risk_r!r}")
        object.__setattr__(self, "gains", _as_float_array(self.gains, "gains"))
        if self.gains.ndim != 1:
            raise ValidationError("gains must be a per-degree vector")


@dataclass(frozen=True)
class SignalParams:
    """Gaussian information structure: the fundamental theta has mean mu and
    precision sigma^2; type k observes it with private precision sigma_k^2."""

    mu: float
    sigma: float
    sigma_k: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.mu) and 0 < self.mu < 1):
            raise ValidationError(f"mu must lie in (0, 1), got {self.mu!r}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma_k", _as_float_array(self.sigma_k, "sigma_k"))
        if self.sigma_k.ndim != 1 or len(self.sigma_k) == 0:
            raise ValidationError("sigma_k must be a non-empty vector")
        if np.any(self.sigma_k <= 0):
            raise ValidationError("sigma_k entries must be positive")

    def with_sigma(self, sigma: float) -> "SignalParams":
        return SignalParams(self.mu, sigma, self.sigma_k.copy())


def default_initial_profile(model: PopulationModel, i_min: float = 0.01,
                            i_max: float = 0.05) -> np.ndarray:
    """Initial infection shares, linear in degree from i_min to i_max.

    Every type and action within a degree starts at the same level. With a
    single degree the profile is constant at i_min.
    """
    if not 0 <= i_min <= i_max <= 1:
        raise DomainError(f"need 0 <= i_min <= i_max <= 1, got ({i_min!r}, {i_max!r})")
    degrees = np.asarray(model.degrees, dtype=float)
    if degrees[-1] == degrees[0]:
        levels = np.full_like(degrees, i_min)
    else:
        levels = i_min + (i_max - i_min) * (degrees - degrees[0]) / (degrees[-1] - degrees[0])
    profile = np.empty((len(degrees), model.n_types, 2))
    profile[:] = levels[:, None, None]
    return profile


def validate_profile(profile: np.ndarray, model: PopulationModel) -> np.ndarray:
    """Check an infection profile's shape and [0, 1] range; return as array."""
    arr = _as_float_array(profile, "infection profile")
    expected = (len(model.degrees), model.n_types, 2)
    if arr.shape != expected:
        raise ValidationError(f"profile shape {arr.shape} does not match {expected}")
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValidationError("profile entries must lie in [0, 1]")
    return arr
