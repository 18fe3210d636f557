"""Square-full values of quadratic polynomials: exact counting, the curves
and Gaussian-integer structure behind them, and a desk-scale determinant
method."""

from .errors import DomainError

__version__ = "0.1.0"

__all__ = ["DomainError", "__version__"]
