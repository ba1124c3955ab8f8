class ExportError(Exception):
    """Base class for exporter failures."""


class DatasetError(ExportError):
    """The input dataset file is malformed."""


class ModelLoadError(ExportError):
    """A pretrained encoder could not be loaded."""


class AlignmentError(ExportError):
    """Subword pieces do not reconstruct the word tokens."""
