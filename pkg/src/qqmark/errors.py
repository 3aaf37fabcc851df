class IllegalOperationError(ValueError):
    """An operation touches a half that is already consumed (or does not exist)."""


class MalformedStrategyError(ValueError):
    """A strategy tree is structurally broken; ``path`` locates the bad node."""

    def __init__(self, message: str, path: tuple = ()):
        where = " -> ".join(str(p) for p in path) or "<root>"
        super().__init__(f"{message} [path: {where}]")
        self.path = path


class InapplicableStrategyError(ValueError):
    """A scripted strategy's precondition does not hold for this target set."""

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state
