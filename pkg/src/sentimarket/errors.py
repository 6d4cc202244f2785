"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to a
distinct process status per error class.
"""

from __future__ import annotations


class SentimarketError(ValueError):
    exit_code = 1


class MissingInput(SentimarketError):
    exit_code = 3


# ingest
class IngestError(SentimarketError):
    exit_code = 10


class MissingColumn(IngestError):
    exit_code = 11


class NonMonotonicDates(IngestError):
    exit_code = 12


class MalformedNumber(IngestError):
    exit_code = 13

    def __init__(self, row: int, message: str = ""):
        self.row = row
        super().__init__(message or f"unparseable numeric field in row {row}")


class InvalidBar(IngestError):
    exit_code = 14

    def __init__(self, row: int, message: str = ""):
        self.row = row
        super().__init__(message or f"price bar invariant violated in row {row}")


class EmptyCorpus(IngestError):
    exit_code = 15


class AllLinesMalformed(IngestError):
    exit_code = 16


class InvalidTicker(IngestError):
    exit_code = 17


class MalformedLine(IngestError):
    exit_code = 18

    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(message or f"malformed line {line}")


class ScoreOutOfRange(IngestError):
    exit_code = 19

    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(message or f"score out of [-1, 1] on line {line}")


# series / statistics
class SeriesError(SentimarketError):
    exit_code = 20


class TooShort(SeriesError):
    exit_code = 21


class ZeroBase(SeriesError):
    exit_code = 22

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"zero base value at index {index}")


class EmptyIntersection(SeriesError):
    exit_code = 23


class NotAligned(SeriesError):
    exit_code = 24


class ZeroVariance(SeriesError):
    exit_code = 25


class RankDeficient(SeriesError):
    exit_code = 26


class SingularDesign(RankDeficient):
    exit_code = 27


class InvalidDegreesOfFreedom(SeriesError):
    exit_code = 28


# dataset / model
class DatasetError(SentimarketError):
    exit_code = 30


class MissingSignals(DatasetError):
    exit_code = 31


class NoOverlappingDates(DatasetError):
    exit_code = 32


class TooFewRows(DatasetError):
    exit_code = 33


class ModelError(SentimarketError):
    exit_code = 40


class SingleClass(ModelError):
    exit_code = 41


class NonFiniteFeature(ModelError):
    exit_code = 42


class DimensionMismatch(ModelError):
    exit_code = 43


class EmptyGrid(ModelError):
    exit_code = 44
