"""Elliptic Z_N-vertex R-matrix, deformed W_N structure functions and mode tables."""

from ellw.errors import BranchError, BranchWarning, DomainError, EllwError, PoleError, TruncationError
from ellw.params import ModularParams, Tolerance, TruncationConfig

__all__ = [
    "BranchError",
    "BranchWarning",
    "DomainError",
    "EllwError",
    "ModularParams",
    "PoleError",
    "Tolerance",
    "TruncationConfig",
    "TruncationError",
]

__version__ = "0.1.0"
