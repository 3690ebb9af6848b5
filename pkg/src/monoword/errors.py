"""Exception types shared across the package."""


class BudgetExceededError(RuntimeError):
    """A computation was refused because it would exceed a configured budget.

    The message always names the budget that was hit, so callers (and the
    command line) can surface it verbatim.
    """


class SingularMatrixError(RuntimeError):
    """A linear solve or determinant hit a numerically singular matrix."""

    def __init__(self, message, condition_estimate=None):
        if condition_estimate is not None:
            message = f"{message} (condition estimate {condition_estimate:.3e})"
        super().__init__(message)
        self.condition_estimate = condition_estimate


class IntegrationError(RuntimeError):
    """An ODE integration failed; the message carries a restart hint."""


class PrecisionNotReachedError(RuntimeError):
    """A stochastic estimate missed the requested precision.

    Carries the achieved value and standard error so the caller can decide
    whether to accept the cruder answer.
    """

    def __init__(self, message, value, standard_error):
        super().__init__(
            f"{message}: achieved standard error {standard_error:.3e}"
        )
        self.value = value
        self.standard_error = standard_error
