class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class OutOfRegimeError(InvalidInputError):
    """Raised when parameters fall outside the validity region of a closed form."""
