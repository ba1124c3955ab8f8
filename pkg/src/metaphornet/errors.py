"""Exception hierarchy shared across the package.

Data-shaped failures (anything a CLI user can fix by handing in different
files) inherit from DataError so the command layer can map them to one
exit code.
"""


class MetaphorNetError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(MetaphorNetError, ValueError):
    """Tensor operands have incompatible shapes."""


class DomainError(MetaphorNetError, ValueError):
    """Operand outside an operation's mathematical domain (e.g. log of <= 0)."""


class MaskError(MetaphorNetError, ValueError):
    """A softmax / attention mask excludes every position."""


class GraphError(MetaphorNetError, ValueError):
    """Backward pass seeded incorrectly (non-scalar seed)."""


class ArgumentError(MetaphorNetError, ValueError):
    """An argument value is out of range for the requested operation."""


class DataError(MetaphorNetError):
    """Base class for problems with user-supplied data files."""


class ParseError(DataError):
    """A normalized dataset line could not be parsed."""


class IntegrityError(DataError):
    """Dataset-level invariant broken (duplicate ids, ...)."""


class EmptyDatasetError(DataError):
    """An operation that needs examples received none."""


class ConversionError(DataError):
    """A raw corpus file does not match the expected native layout."""


class FormatError(DataError):
    """An embedding file does not start with the MDEMB1 magic/header."""


class CorruptionError(DataError):
    """An embedding or checkpoint file is truncated or inconsistent."""


class CoverageError(DataError):
    """Embeddings do not cover the dataset they are paired with."""


class UndefinedMetricError(DataError):
    """A metric (AUC) is undefined for the given inputs (single-class gold)."""


class ConfigError(MetaphorNetError):
    """An experiment config file is invalid; message names the field."""
