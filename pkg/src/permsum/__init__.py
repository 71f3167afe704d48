"""Exponential sums of phase polynomials, gadget graphs and their permanents."""
from ._backend import BACKEND
from .errors import DomainError, NumericError, PermsumError, ResourceError, UnsupportedError

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "NumericError",
    "PermsumError",
    "ResourceError",
    "UnsupportedError",
    "__version__",
]
