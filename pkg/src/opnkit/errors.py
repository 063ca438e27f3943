"""Exception types shared across the toolkit.

The CLI maps these onto its exit-code contract: domain and budget errors
are usage-level failures (exit 2), inconsistency errors are internal
contradictions that should never occur on valid inputs (exit 3).
"""


class OpnkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(OpnkitError, ValueError):
    """An argument is outside the documented domain of an operation."""


class BudgetError(OpnkitError, RuntimeError):
    """A computation was refused because it exceeds a configured budget.

    Refusal is always explicit: the message states the budget and the
    offending size, never a silent wrong answer.
    """


class InconsistencyError(OpnkitError, RuntimeError):
    """A proven arithmetic fact failed to hold.

    Raising this signals an implementation bug (or bad hand-built data),
    not a property of the input; the CLI reports it as exit code 3.
    """
