"""Exception types shared across the package."""


class WorkbenchError(Exception):
    """Base class for package-specific errors."""


class InvalidArgumentError(WorkbenchError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(WorkbenchError, ValueError):
    """A numeric input lies outside the defined domain of a formula."""


class BudgetExceededError(WorkbenchError):
    """An exact search was requested beyond its configured budget."""


class MonotonicityError(WorkbenchError, RuntimeError):
    """A bracketing step found non-monotone samples and refused to bisect."""


class ModeMismatchError(WorkbenchError, TypeError):
    """Exact arithmetic was requested from a float-only scalar sequence."""


class PreconditionError(WorkbenchError, ValueError):
    """A structural precondition of a construction does not hold."""


class StageFailureError(WorkbenchError):
    """A staged search exhausted its bounds before completing a stage.

    Inconclusive by contract: carries the completed stages so callers can
    report partial progress without treating the failure as a refutation.
    """

    def __init__(self, stage: int, completed):
        super().__init__(f"no witness found at stage {stage}")
        self.stage = stage
        self.completed = tuple(completed)


class SchemaError(WorkbenchError, ValueError):
    """A JSON config does not match its schema.

    The message always starts with a JSON-path-style location (e.g.
    "$.ball.radius") so CLI users can find the offending field.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
