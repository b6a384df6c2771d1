"""Errors raised by the simulation and analysis code."""

from dataclasses import dataclass


class CitenetError(ValueError):
    """Base class for every domain error in citenet."""


class EmptyInputError(CitenetError):
    pass


class InsufficientHorizonError(CitenetError):
    pass


class ForwardEdgeError(CitenetError):
    pass


class MissingSeriesYearError(CitenetError):
    def __init__(self, year):
        super().__init__(f"Year {year} is cited but missing from the n_a series")
        self.year = year


class ConfigError(CitenetError):
    pass


@dataclass(frozen=True)
class LineError:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


class IngestError(CitenetError):
    """Raised when an input stream cannot be used at all."""

    def __init__(self, message, errors=()):
        super().__init__(message)
        self.errors = list(errors)


class PeriodOutOfRangeError(CitenetError):
    pass


class InsufficientDataError(CitenetError):
    pass
