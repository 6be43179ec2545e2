"""Exception hierarchy. The CLI maps each family to an exit code."""


class EdgeClustError(Exception):
    pass


class InputError(EdgeClustError, ValueError):
    """Bad input data (exit code 2)."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ParseError):
    pass


class DuplicateIdError(ParseError):
    pass


class TimeParseError(InputError):
    pass


class ParameterError(EdgeClustError, ValueError):
    """Out-of-range or inconsistent parameters (exit code 3)."""


class UndefinedCorrelationError(EdgeClustError, ValueError):
    pass
