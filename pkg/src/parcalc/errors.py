"""Exception types shared by every parcalc module.

The CLI maps these onto exit codes: ``PreconditionError`` and ``CapExceeded``
exit with status 1, ``StructuralError`` (malformed input) with status 2.
"""

from __future__ import annotations


class ParcalcError(Exception):
    code = "error"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class StructuralError(ParcalcError, ValueError):
    """Input does not describe a well-formed object (ragged rows, bad flags, ...)."""

    code = "structural"


class PreconditionError(ParcalcError, ValueError):
    """Input is well-formed but outside the domain where an operation applies."""

    code = "precondition"


class CapExceeded(ParcalcError):
    """An enumeration would exceed its configured size cap."""

    code = "cap_exceeded"

    def __init__(self, estimate: int, cap: int, what: str = "search space"):
        super().__init__(f"{what} of size {estimate} exceeds cap {cap}")
        self.estimate = estimate
        self.cap = cap
