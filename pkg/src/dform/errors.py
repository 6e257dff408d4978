"""Exception types shared across the package.

Everything user-triggerable derives from DFormError so the CLI and the
HTTP service can map the whole family to exit code 1 / HTTP 400 in one
place.  Anything else escaping is treated as an internal error.
"""


class DFormError(ValueError):
    """Base class for user-facing errors (bad input, bad chain, bad grid)."""


class ParseError(DFormError):
    """Malformed expression source.

    offset is a byte offset into the UTF-8 encoding of the source and
    always lies within [0, len(source)].  token holds the offending
    token text when one exists.
    """

    def __init__(self, message: str, offset: int, token: str = ""):
        super().__init__(message)
        self.message = message
        self.offset = offset
        self.token = token


class FieldError(DFormError):
    """Bad grid or field construction (shape mismatch, missing data)."""


class OperationError(DFormError):
    """An operation applied to an object that cannot support it."""


class ChainError(DFormError):
    """An op chain that fails kind checking before execution."""


class StyleError(DFormError):
    """A plot style field outside its documented range."""
