"""
Exception hierarchy for semicon.

Every error raised by the library derives from SemiconError, which is a
ValueError so that the CLI pipelines built on returns' @safe see the same
failure type the rest of the code base has always handled. Expected codec
outcomes (error events E1-E3) are not exceptions: they travel as
Failure values, see semicon.codec.
"""
from typing import Iterable, Optional


class SemiconError(ValueError):
    """Base class for all semicon errors."""


class InputError(SemiconError):
    """Malformed argument: bad symbol, wrong length, out-of-range parameter."""


class SpecError(SemiconError):
    """Invalid constraint specification."""


class BudgetExceededError(SemiconError):
    """Exhaustive enumeration refused because the search space is too large."""


class InfeasibleSpecError(SemiconError):
    """No shift-invariant measure satisfies the frequency caps."""

    def __init__(self, violation: float):
        self.violation = violation
        super().__init__(f"infeasible constraint spec (phase-1 violation {violation:.3e})")


class NonConvergenceError(SemiconError):
    """Iterative solver hit its iteration cap."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"solver did not converge after {iterations} iterations (residual {residual:.3e})")


class NotShiftInvariantError(SemiconError):
    """A k-tuple measure fails the shift-invariance test."""

    def __init__(self, defect: float):
        self.defect = defect
        super().__init__(f"measure is not shift invariant (defect {defect:.3e})")


class ReducibleChainError(SemiconError):
    """Markov chain support splits into several closed classes."""

    def __init__(self, stranded: Iterable[int]):
        self.stranded = sorted(stranded)
        super().__init__(f"chain is reducible; stranded vertices {self.stranded}")


class CirculationError(SemiconError):
    """Invalid circulation or cycle operation."""

    def __init__(self, message: str, edge: Optional[tuple] = None):
        self.edge = edge
        super().__init__(message)


class DecodeFailure(SemiconError):
    """Biased stream cannot be mapped back to its information bits."""


class ContainerError(SemiconError):
    """Encoded file is malformed or does not match the constraint spec."""
