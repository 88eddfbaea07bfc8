"""Vaccination game on a degree-structured contact network.

A population of degree/type groups plays a coordination game: vaccinate
at cost c, or stay unvaccinated and face infection risk that depends on
whether society reopens. Reopening happens when vaccination coverage
reaches an unknown threshold observed through noisy public and private
Gaussian signals, which makes the coverage decision a global game with a
unique switching equilibrium under a precision condition. The package
couples that equilibrium layer to a two-regime mean-field epidemic model
and provides the design-side computations: herd thresholds per degree,
signal-precision certificates for disease-free reopening, cost bounds,
and a public-precision sweep for picking an information policy.
"""

from .errors import (ConfigError, DomainError, IntegrationError, SolverError,
                     ValidationError, VaxGameError)
from .normal import std_normal_cdf, std_normal_pdf, std_normal_quantile
from .population import (EconParams, EpidemicParams, Partition,
                         PopulationModel, SignalParams,
                         default_initial_profile, renormalized,
                         validate_profile)
from .epidemic import (SteadyState, Trajectory, disease_free_stable,
                       integrate, persistence_check, steady_severity,
                       steady_state, terminal_profile, theta_aggregate,
                       write_trajectory_csv)
from .equilibrium import (EquilibriumResult, average_action, critical_signals,
                          limit_threshold, ne_partition,
                          posterior_reopen_probability, reopening_probability,
                          solve_threshold, threshold_mu_sensitivity,
                          threshold_residual, uniqueness_condition)
from .incentives import (IncentiveReport, PayoffTable, SubstitutesReport,
                         bump_partition, complementarity_check, payoff_gaps,
                         payoffs, substitutes_check)
from .design import (CostBounds, HerdThresholds, PrecisionRegion, cost_bounds,
                     herd_threshold, herd_thresholds,
                     precision_stationary_point, precision_threshold_curve,
                     private_precision_region, public_signal_condition,
                     required_threshold, w_at_required)
from .config import SweepConfig, VerifyOptions, load_config
from .sweep import (CSV_HEADER, SweepRow, run_sweep, suggest_region,
                    sweep_point, write_sweep_csv)

__version__ = "1.0.0"

__all__ = [
    "VaxGameError", "ValidationError", "DomainError", "IntegrationError",
    "SolverError", "ConfigError",
    "std_normal_pdf", "std_normal_cdf", "std_normal_quantile",
    "PopulationModel", "Partition", "EpidemicParams", "EconParams",
    "SignalParams", "renormalized", "default_initial_profile",
    "validate_profile",
    "Trajectory", "SteadyState", "integrate", "terminal_profile",
    "theta_aggregate", "steady_state", "steady_severity",
    "disease_free_stable", "persistence_check", "write_trajectory_csv",
    "EquilibriumResult", "uniqueness_condition", "critical_signals",
    "posterior_reopen_probability", "average_action", "threshold_residual",
    "solve_threshold", "ne_partition", "reopening_probability",
    "limit_threshold", "threshold_mu_sensitivity",
    "PayoffTable", "IncentiveReport", "SubstitutesReport", "payoffs",
    "payoff_gaps", "complementarity_check", "substitutes_check",
    "bump_partition",
    "HerdThresholds", "PrecisionRegion", "CostBounds", "herd_threshold",
    "herd_thresholds", "required_threshold", "precision_threshold_curve",
    "precision_stationary_point", "w_at_required", "private_precision_region",
    "public_signal_condition", "cost_bounds",
    "SweepConfig", "VerifyOptions", "load_config",
    "SweepRow", "CSV_HEADER", "run_sweep", "sweep_point", "suggest_region",
    "write_sweep_csv",
]
