"""Exception hierarchy; each class maps to a distinct CLI exit code."""


class MuldepError(Exception):
    exit_code = 1


class InvalidInputError(MuldepError, ValueError):
    exit_code = 2


class UndefinedHeightError(InvalidInputError):
    """Raised for the height of zero."""


class UnsupportedError(MuldepError):
    exit_code = 3


class BudgetExceededError(MuldepError):
    exit_code = 4

    def __init__(self, estimate: int, budget: int, what: str = "dependence tests"):
        super().__init__(f"estimated {estimate} {what} exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


class UndecidedError(MuldepError):
    """Certified evaluation could not decide within the precision cap."""

    exit_code = 5
