class CommeqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSize(CommeqError, ValueError):
    pass


class InvalidAlgebra(CommeqError, ValueError):
    pass


class CapacityExceeded(CommeqError):
    pass


class BudgetExceeded(CommeqError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NotACongruence(CommeqError, ValueError):
    def __init__(self, message, symbol=None, args=None):
        super().__init__(message)
        self.symbol = symbol
        self.args_ = args


class UnboundSymbol(CommeqError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnboundVariable(CommeqError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SizeMismatch(CommeqError, ValueError):
    pass


class JoinRequiresEquivalences(CommeqError, ValueError):
    pass


class OperandNotCongruence(CommeqError, ValueError):
    def __init__(self, message, subterm=None):
        super().__init__(message)
        self.subterm = subterm


class RequiresJoinFree(CommeqError, ValueError):
    pass


class MissingK(CommeqError, ValueError):
    pass


class TermSyntaxError(CommeqError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class AlgebraFileError(CommeqError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
