"""Exception types shared across the package."""


class SpecParseError(ValueError):
    """Raised when a constellation spec string cannot be parsed.

    `position` is the character offset in the input at which parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvariantError(RuntimeError):
    """An internal consistency check failed (maps to CLI exit code 3)."""
