"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented contract."""


class ParseError(ValidationError):
    """Raised on malformed file content; carries location info when known."""

    def __init__(self, message, *, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NotFittedError(ValidationError):
    """Raised when predict/score is called on an estimator before fit."""
