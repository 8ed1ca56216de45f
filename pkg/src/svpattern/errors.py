"""Exception hierarchy for svpattern."""

from __future__ import annotations


class SvPatternError(ValueError):
    """Base class for all errors raised by this package."""


class PatternParseError(SvPatternError):
    pass


class EmptyInput(PatternParseError):
    def __init__(self, msg: str = "no pattern rows in input"):
        super().__init__(msg)


class RaggedRows(PatternParseError):
    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        super().__init__(f"row {row_index} has {got} cells, expected {expected}")


class InvalidCharacter(PatternParseError):
    def __init__(self, position: tuple[int, int], char: str):
        self.position = position
        self.char = char
        super().__init__(f"invalid character {char!r} at line {position[0]}, column {position[1]}")


class HeaderMismatch(PatternParseError):
    pass


class MatrixParseError(SvPatternError):
    pass


class DimensionMismatch(SvPatternError):
    pass


class NotSquare(SvPatternError):
    pass


class NotFullTermRank(SvPatternError):
    pass


class NotStandardForm(SvPatternError):
    pass


class VertexOutOfRange(SvPatternError):
    pass


class NonFiniteInput(SvPatternError):
    pass


class NotSymmetric(SvPatternError):
    pass


class NotSuperpattern(SvPatternError):
    pass


class HypothesisViolated(SvPatternError):
    pass


class NoWeakCycle(SvPatternError):
    pass


class NotSingleSupport(SvPatternError):
    pass


class DifferentSupportRows(SvPatternError):
    pass


class ZeroPattern(SvPatternError):
    pass


class PreconditionTermRank(SvPatternError):
    pass


class CapExceeded(SvPatternError):
    pass
