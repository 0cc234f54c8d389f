"""Exception hierarchy shared by every module of the package."""


class QGevreyError(Exception):
    """Base class for all errors raised by :mod:`qgevrey`."""


class ConfigurationError(QGevreyError, ValueError):
    """A parameter pack or geometric configuration violates a precondition."""


class InvalidSymbolError(ConfigurationError):
    """A symbol value needed to form a polynomial is zero."""


class DegenerateSymbolError(ConfigurationError):
    """The Borel symbol is constant in tau, so it has no roots."""


class SingularSymbolError(QGevreyError, ArithmeticError):
    """A symbol vanishes exactly at a grid node."""


class DirectionError(QGevreyError, ValueError):
    """A Laplace ray does not provide enough damping for the requested point."""


class RangeError(QGevreyError, OverflowError):
    """A kernel overflowed or a truncation radius is too small."""


class DivergenceError(QGevreyError, ValueError):
    """An integral leaves its domain of convergence."""


class GridMismatchError(QGevreyError, ValueError):
    """Two grid functions do not live on compatible grids."""


class NoContractionError(QGevreyError, RuntimeError):
    """An iteration failed to contract."""


class DomainError(QGevreyError, ValueError):
    """An evaluation point is outside the admissible domain."""


class InsufficientDataError(QGevreyError, ValueError):
    """Not enough samples or terms to run a fit."""


class GeometryError(QGevreyError, ValueError):
    """An integration path or continuation region meets a singularity."""


class DependencyError(QGevreyError, RuntimeError):
    """A pipeline stage is missing the artifacts of an upstream stage."""


class SchemaError(ConfigurationError):
    """A scenario document is missing keys or has fields of the wrong type."""
