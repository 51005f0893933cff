"""Exception types shared across the package."""


class PermclassError(Exception):
    """Base class for all errors raised by permclass."""


class InvalidWordError(PermclassError, ValueError):
    """A word is not a valid permutation, pattern or pseudo-permutation."""


class CapError(PermclassError, ValueError):
    """Length exceeds the engine-wide cap of 12."""


class OutOfRangeError(PermclassError, ValueError):
    """A rank or length argument lies outside its valid range."""


class StaleOccurrenceError(PermclassError, ValueError):
    """An occurrence does not realize its pattern in the given host."""


class PrefixError(PermclassError, ValueError):
    """A permutation does not start with the required identity prefix."""

    def __init__(self, position: int, expected: int, found: int):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"prefix mismatch at position {position}: expected {expected}, found {found}"
        )


class FormulaError(PermclassError, ValueError):
    """A closed-form formula was evaluated outside its range or did not divide evenly."""


class ResourceError(PermclassError, MemoryError):
    """Projected memory use exceeds the configured budget."""

    def __init__(self, message: str, budget: int):
        self.budget = budget
        super().__init__(f"{message} (memory budget {budget} bytes)")
