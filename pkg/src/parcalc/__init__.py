"""Exact parabolic-bundle calculus, HN polygon arithmetic, and surface-group covers."""

from .errors import CapExceeded, ParcalcError, PreconditionError, StructuralError

__all__ = ["CapExceeded", "ParcalcError", "PreconditionError", "StructuralError"]
__version__ = "0.1.0"
