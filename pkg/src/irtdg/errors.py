"""Exception types shared across the package."""

from __future__ import annotations


class TDGError(Exception):
    """Base class for every error raised by irtdg."""


class InvalidInstance(TDGError, ValueError):
    """An instance (or document) fails validation.

    ``violations`` holds the individual :class:`~irtdg.model.Violation`
    records so callers can report all of them at once.
    """

    def __init__(self, violations, message=None):
        self.violations = list(violations)
        if message is None:
            message = "; ".join(str(v) for v in self.violations) or "invalid instance"
        super().__init__(message)


class DocumentError(TDGError, ValueError):
    """Malformed JSON input: bad syntax, wrong types, bad rational strings."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class InvalidAssignment(TDGError, ValueError):
    """An assignment is not a total injective map into the vertex set."""


class DistanceOutOfRange(TDGError, ValueError):
    """A table-defined distance factor was evaluated past its last entry."""


class StructureMismatch(TDGError, ValueError):
    """A specialised solver was called on an instance outside its case."""


class NotAPath(StructureMismatch):
    """The topology is not a simple path."""


class GeneratorPrecondition(TDGError, ValueError):
    """A source problem violates the preconditions of a gadget generator."""


class DegenerateParameter(TDGError, ValueError):
    """A generator parameter makes the construction meaningless (e.g. k < 2)."""


class CertificateInvalid(TDGError, ValueError):
    """A source-problem certificate does not solve its source instance."""


class OracleBudgetExceeded(TDGError, RuntimeError):
    """An exhaustive source-problem decider ran past its search budget."""
