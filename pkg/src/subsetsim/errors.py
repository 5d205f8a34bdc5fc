"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A run configuration or argument violates its documented invariants."""


class BudgetExceededError(RuntimeError):
    """A simulation could not finish within its level budget.

    Carries the level records produced so far in ``partial_records`` so a
    caller can inspect how far the run got.
    """

    def __init__(self, message, records=None):
        super().__init__(message)
        self.partial_records = list(records) if records is not None else []


class ThresholdTieWarning(UserWarning):
    """Order statistics at the level-probability quantile were tied."""
