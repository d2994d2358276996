"""Exception types shared across the package."""


class ElectrovacError(Exception):
    """Base class for all package errors."""


class DomainError(ElectrovacError):
    """A radius or interval lies outside the valid domain of the data."""


class NumericsError(ElectrovacError):
    """A numerical procedure failed to deliver its accuracy contract."""


class ParameterError(ElectrovacError):
    """Invalid model parameters (non-positive mass, bad dimension, ...)."""


class DegeneracyError(ElectrovacError):
    """An operation required V != 0 but the potential is degenerate."""
