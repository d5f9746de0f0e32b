"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MetzlerZetaError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(MetzlerZetaError, ValueError):
    """A graph description violates a structural or rate invariant."""


class MalformedDocumentError(GraphValidationError):
    pass


class SelfLoopError(GraphValidationError):
    pass


class DuplicateArcError(GraphValidationError):
    pass


class NonPositiveRateError(GraphValidationError):
    pass


class DisconnectedGraphError(GraphValidationError):
    pass


class DimensionMismatchError(MetzlerZetaError, ValueError):
    pass


class PoleError(MetzlerZetaError, ArithmeticError):
    """Evaluation point sits (numerically) on a pole of a rational factor."""


class StructureMismatchError(MetzlerZetaError, ValueError):
    """The requested specialization does not apply to the given graph."""


class ConvergenceDomainError(MetzlerZetaError, ValueError):
    """A series or logarithm is evaluated outside its domain of validity."""


class EigenSolverError(MetzlerZetaError, ArithmeticError):
    pass


class SingularPencilError(MetzlerZetaError, ArithmeticError):
    pass
