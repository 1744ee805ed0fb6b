"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto the
documented process exit codes without inspecting messages.
"""


class HomcatError(Exception):
    exit_code = 1


class ParseError(HomcatError):
    """Malformed input literal or file."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class PreconditionError(HomcatError):
    """Inputs violate a hypothesis of the requested computation."""

    exit_code = 3


class DegreeError(PreconditionError):
    pass


class BudgetError(HomcatError):
    """A configured resource cap would be exceeded; nothing was truncated."""

    exit_code = 4


class VerificationError(HomcatError):
    """A mathematical self-check failed (exactness, commutation, ...)."""

    exit_code = 5


class ConsistencyError(VerificationError):
    """A unique lift or factorisation that must exist did not."""


class GroupAxiomError(ParseError):
    """Cayley table violates a group axiom."""
