"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the region an operation requires."""


class DegenerateConfigurationError(ValueError):
    """Nodes coincide or sit too close together for a stable computation."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, message: str, count: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.count = count
        self.budget = budget


class InsufficientMassError(ValueError):
    """The accumulated boundary mass cannot complete a single block."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class RangeError(ValueError):
    """A parameter falls outside its admissible range."""


class ParseError(ValueError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
