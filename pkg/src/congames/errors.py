"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent user input (files, ids, parameters)."""


class BudgetExceededError(RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


class GenerationError(RuntimeError):
    """Instance generation could not satisfy the request (e.g. connectivity)."""


class DefectError(AssertionError):
    """A mathematically guaranteed invariant failed; signals an implementation bug."""
