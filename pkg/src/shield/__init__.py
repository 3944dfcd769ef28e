"""SHIELD: semantic-similarity-weighted signal detection for trial AEs."""

from ._kernels import BACKEND
from .errors import DataError, ShieldError, UsageError

__version__ = "0.1.0"

__all__ = ["BACKEND", "DataError", "ShieldError", "UsageError", "__version__"]
