# error_handling.py

"""
Error types shared by every module, plus the CLI exit-code mapping.
"""
from typing import Optional


class UltrametricError(Exception):
    """Base class for all errors raised by this package."""


class MalformedPartitionError(UltrametricError, ValueError):
    pass


class InvalidChainError(UltrametricError, ValueError):
    pass


class DimensionError(UltrametricError, ValueError):
    pass


class CapacityError(UltrametricError):
    """Input size exceeds an enumeration or solver cap."""

    def __init__(self, what: str, n: int, cap: int):
        self.what = what
        self.n = n
        self.cap = cap
        super().__init__(f"{what}: n={n} exceeds the cap of {cap} taxa")


class NotUltrametricError(UltrametricError, ValueError):
    pass


class DegenerateInputError(UltrametricError, ValueError):
    pass


class InvalidWitnessError(UltrametricError, ValueError):
    pass


class ParseError(UltrametricError, ValueError):
    """Input text could not be read; carries the 1-based line and column when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(f"{message}{where}")


class DimensionMismatchError(ParseError):
    pass


class AsymmetryError(ParseError):
    pass


class NonNumericCellError(ParseError):
    pass


class DuplicateNameError(ParseError):
    pass


class NewickParseError(ParseError):
    pass


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised under the CLI to its documented exit status."""
    if isinstance(exc, CapacityError):
        return EXIT_CAPACITY
    if isinstance(exc, (ParseError, FileNotFoundError)):
        return EXIT_PARSE
    return EXIT_FAILURE


def require_capacity(what: str, n: int, cap: int) -> None:
    if n > cap:
        raise CapacityError(what, n, cap)
