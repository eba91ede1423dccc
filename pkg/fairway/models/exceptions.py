# coding: utf-8

class FairwayError(Exception):
    """Base class for every error the toolkit raises on purpose."""
    exit_code = 1


class ConfigError(FairwayError):
    exit_code = 2


class DataError(FairwayError):
    exit_code = 3


class DegenerateGroup(FairwayError):
    """A protected group is too small or single-class to fit a group model on."""
    exit_code = 4


# configuration
class SpecError(ConfigError):
    pass


class UnknownAttribute(ConfigError):
    pass


class UnknownDataset(ConfigError):
    pass


class InvalidParameter(ConfigError):
    pass


# data / numerics
class MissingColumn(DataError):
    pass


class EmptyAfterFilter(DataError):
    pass


class NonBinaryProtected(DataError):
    pass


class NonNumericValue(DataError):
    pass


class TooFewRows(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class SingleClass(DataError):
    pass


class EmptyInput(DataError):
    pass


class LengthMismatch(DataError):
    pass


class AttributeAbsent(DataError):
    pass


class SpaceTooSmall(DataError):
    pass


class IoFailure(DataError):
    pass


class FetchError(DataError):
    pass


def annotate(e: FairwayError, prefix: str) -> FairwayError:
    """Return a copy of `e` (same class, same exit code) with `prefix` prepended to its message."""
    annotated = type(e)(f'{prefix}: {e}')
    annotated.__cause__ = e
    return annotated
