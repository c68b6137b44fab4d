"""Exception hierarchy shared by every module in the package."""


class CostElmError(Exception):
    """Base class for all errors raised by costelm."""


class InvalidBoundsError(CostElmError, ValueError):
    pass


class ShapeError(CostElmError, ValueError):
    pass


class SingularMatrixError(CostElmError, ArithmeticError):
    pass


class NotPositiveDefiniteError(CostElmError, ArithmeticError):
    pass


class InvalidLabelError(CostElmError, ValueError):
    pass


class InvalidDatasetError(CostElmError, ValueError):
    pass


class InvalidDimensionError(CostElmError, ValueError):
    pass


class EmptyInputError(CostElmError, ValueError):
    pass


class InvalidSplitError(CostElmError, ValueError):
    pass


class ConfigError(CostElmError, ValueError):
    pass


class ParseError(CostElmError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
