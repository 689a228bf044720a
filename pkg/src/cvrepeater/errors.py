"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one base class.
"""


class DomainError(ValueError):
    """A scalar argument is outside its allowed range."""


class PhysicalityError(ValueError):
    """A covariance matrix violates the uncertainty principle."""


class SingularityError(ValueError):
    """A denominator in a closed-form expression is too close to zero."""


class MeasurementDegeneracyError(ValueError):
    """The conditioning matrix of a Bell measurement is singular."""


class InvalidEquivalentError(ValueError):
    """The amplifier-equivalent link description is unreliable (lambda_g >= 1)."""


class ConfigError(ValueError):
    """A scenario configuration failed validation."""
