"""Shared exception types for the groupconv library."""

from __future__ import annotations


class GroupConvError(Exception):
    """Base class for all library-specific errors."""


class GroupAxiomError(GroupConvError):
    """A composition table violates a group axiom.

    Carries the name of the violated axiom and a witness triple of element
    indices that exhibits the violation.
    """

    def __init__(self, axiom: str, witness: tuple | None, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        msg = f"group axiom violated: {axiom}"
        if witness is not None:
            msg += f", witness {witness}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class IrrepsUnavailableError(GroupConvError):
    """Irreducible representations are not computed for this group family."""


class IncompatibleSignalError(GroupConvError):
    """Signals defined on different groups (or of wrong length) were mixed."""


class DegenerateFilterError(GroupConvError):
    """The filter is identically zero and cannot be encoded."""


class NormalizationError(GroupConvError):
    """A matrix or coefficient violates a required normalization bound."""


class SingularOperationError(GroupConvError):
    """The operation matrix is singular; carries its smallest singular value."""

    def __init__(self, sigma_min: float, detail: str = ""):
        self.sigma_min = sigma_min
        msg = f"operation matrix is singular (sigma_min = {sigma_min:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IllConditionedProblemError(GroupConvError):
    """The integral problem fails its stability requirement."""


class ZeroOutputError(GroupConvError):
    """The encoded operator annihilates the input; post-selection never succeeds."""
