"""Exception hierarchy.

Callers (the CLI in particular) map these onto distinct exit codes, so the
resource and certification failures are kept apart from plain bad input.
"""


class ChiboundError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ChiboundError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(DomainError):
    """A graph, tree, coloring or bound expression failed to parse."""


class ValidationError(DomainError):
    """An operation tree is illegal; ``diagnostics`` lists every issue."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        lines = [str(issue) for issue in diagnostics.issues]
        super().__init__("invalid operation tree:\n  " + "\n  ".join(lines))


class BudgetExceeded(ChiboundError):
    """An exact oracle ran past its step budget."""

    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: step budget of {budget} exceeded")


class CertificationError(ChiboundError):
    """A base graph does not satisfy the bound it was claimed to satisfy."""


class InvariantViolation(ChiboundError, AssertionError):
    """An internal inequality from a constructive proof failed.

    Unreachable when preconditions hold; seeing one means a bug.
    """
