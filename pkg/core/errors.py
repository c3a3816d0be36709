# core/errors.py
"""Fejltyper for Laguerre-domæne beregningerne."""


class LaguerreError(ValueError):
    """Base class for all errors raised by the core package."""


class DomainMismatchError(LaguerreError):
    """Continuous/discrete domain or Laguerre parameter does not match."""


class InsufficientDataError(LaguerreError):
    """Too few coefficients or Markov parameters for the requested operation."""


class SingularDenominatorError(LaguerreError):
    """A divisor that is nonzero for exact delay data vanished numerically."""


class ConfigurationError(LaguerreError):
    """Invalid experiment or CLI configuration."""


class NumericalValidationError(LaguerreError):
    """An experiment check missed its tolerance."""
