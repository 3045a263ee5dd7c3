"""Exception hierarchy shared by every module."""


class UniflabError(Exception):
    """Base class for all errors raised by uniflab."""


class InvalidInputError(UniflabError, ValueError):
    """An argument violates a documented precondition."""


class SizeMismatchError(InvalidInputError):
    """Two objects live on carriers of different sizes."""


class PartitionError(InvalidInputError):
    """Blocks do not form a partition of the carrier."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotASubgroupError(InvalidInputError):
    """A permutation set failed the closure audit."""


class NotEquivalenceError(InvalidInputError):
    """A relation is not an equivalence relation."""

    def __init__(self, message, axiom):
        super().__init__(message)
        self.axiom = axiom


class CapExceededError(UniflabError):
    """A configured size bound was exceeded."""

    def __init__(self, message, cap=None, size=None):
        super().__init__(message)
        self.cap = cap
        self.size = size


class UnknownCheckError(InvalidInputError):
    """A command or check name is not recognized."""
