class BallquotError(Exception):
    """Base class for all errors raised by this package."""


class InputError(BallquotError, ValueError):
    """Malformed or inconsistent input data."""


class UnsupportedError(BallquotError):
    """A configuration the checker deliberately refuses to guess about."""


class InconsistencyError(BallquotError):
    """Input data that contradicts a mathematical identity."""


class CosetOverflow(BallquotError):
    """Coset enumeration exceeded its table bound; retry with a larger one."""

    def __init__(self, limit: int):
        super().__init__(f"coset table overflow at {limit} cosets")
        self.limit = limit


class GroupOverflow(BallquotError):
    """Group closure exceeded its element bound."""

    def __init__(self, limit: int):
        super().__init__(f"group closure exceeded {limit} elements")
        self.limit = limit
