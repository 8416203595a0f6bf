"""Exception hierarchy shared by the library and the command line."""


class InputError(ValueError):
    """Invalid data or arguments supplied by the caller."""


class ParseError(InputError):
    """Malformed edge-list text."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ConfigError(InputError):
    """Inconsistent or unparseable run configuration."""


class ConsistencyError(RuntimeError):
    """An internal invariant was violated."""
