"""Exception types raised across the package."""


class PCGEvalError(Exception):
    """Base class for all package errors."""


class RaggedLines(PCGEvalError, ValueError):
    pass


class UnknownTileCode(PCGEvalError, ValueError):
    def __init__(self, char: str, row: int, col: int):
        super().__init__(f"unknown tile code {char!r} at row {row}, col {col}")
        self.char = char
        self.row = row
        self.col = col


class BlockedEndpoint(PCGEvalError):
    """Start or goal corner of a maze is a wall."""


class NotSolved(PCGEvalError):
    pass


class UnsolvedLevel(PCGEvalError):
    """A metric that needs a solved search result got an unsolved one."""


class InvalidDenominator(PCGEvalError, ValueError):
    pass


class Unsolvable(PCGEvalError):
    pass


class EmptyInput(PCGEvalError, ValueError):
    pass


class ReprDomainMismatch(PCGEvalError, ValueError):
    pass


class HeightOverflow(PCGEvalError, ValueError):
    pass


class BadDimensions(PCGEvalError, ValueError):
    pass


class UnsolvableBase(PCGEvalError, ValueError):
    pass


class DegenerateInput(PCGEvalError, ValueError):
    pass


class InsufficientSolvable(PCGEvalError):
    pass


class ConfigError(PCGEvalError, ValueError):
    pass
