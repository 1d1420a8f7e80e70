"""Exception types shared across the package."""


class GameError(Exception):
    """Base class for all errors raised by ttcgame."""


class InvalidArgumentError(GameError, ValueError):
    """An argument is malformed or out of range."""


class DomainError(GameError, ArithmeticError):
    """A quantity is undefined for the given input (ties, non-positive profit, ...)."""


class BudgetExceededError(GameError, RuntimeError):
    """An exhaustive scan would visit more profiles than allowed."""

    def __init__(self, required, budget):
        self.required = int(required)
        self.budget = int(budget)
        super().__init__(
            f"strategy space has {self.required} profiles, budget is {self.budget}; "
            f"raise the budget to at least {self.required}"
        )


class ValidationError(GameError, ValueError):
    """Input data violates a hard invariant."""


class ParseError(ValidationError):
    """A data file could not be parsed."""

    def __init__(self, message, path=None, row=None, column=None):
        self.path = path
        self.row = row
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"line {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)


class TieWarning(UserWarning):
    """An argmax had several maximizers; the lowest ordinal/index was used."""


class ValidationWarning(UserWarning):
    """Lenient-mode downgrade of a monotonicity violation."""
