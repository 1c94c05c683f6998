"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class IRTError(Exception):
    exit_code = 1
    kind = "error"


class InvalidInputError(IRTError, ValueError):
    exit_code = 4
    kind = "invalid-input"


class DomainError(InvalidInputError):
    kind = "domain"


class ParseError(InvalidInputError):
    exit_code = 3
    kind = "parse"

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigurationError(IRTError, ValueError):
    exit_code = 4
    kind = "configuration"


class NumericalError(IRTError, ArithmeticError):
    exit_code = 5
    kind = "numerical"


class NoSolutionError(NumericalError):
    kind = "no-solution"


class InitializationError(NumericalError):
    kind = "initialization"


class EmptyResultError(NumericalError):
    kind = "empty-result"
