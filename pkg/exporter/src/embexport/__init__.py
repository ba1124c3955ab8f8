"""Export contextualized token embeddings to MDEMB1 files."""

from .align import align_subwords
from .dataset import SentenceRecord, read_dataset
from .encoders import BertEncoder, ElmoEncoder, make_encoder
from .export import ExportJob, ExportReport, export
from .mdemb import write_mdemb

__version__ = "0.1.0"

__all__ = [
    "BertEncoder",
    "ElmoEncoder",
    "ExportJob",
    "ExportReport",
    "SentenceRecord",
    "align_subwords",
    "export",
    "make_encoder",
    "read_dataset",
    "write_mdemb",
]
