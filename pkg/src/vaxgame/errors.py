"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, everything else
raised during a run -> 1.
"""


class VaxGameError(Exception):
    """Base class for all package errors."""


class ValidationError(VaxGameError):
    """Structural invariant violated: bad masses, shapes, or parameter ranges."""


class DomainError(VaxGameError):
    """Input outside the mathematical domain of an operation."""


class IntegrationError(VaxGameError):
    """ODE integration became unstable even after step refinement."""


class SolverError(VaxGameError):
    """Root finding or fixed-point iteration failed to locate a solution."""


class ConfigError(VaxGameError):
    """Config file missing, unparsable, or missing required fields."""
