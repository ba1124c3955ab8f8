"""The export pipeline: dataset -> encoder -> alignment -> MDEMB1 file."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .align import align_subwords
from .dataset import read_dataset
from .encoders import make_encoder
from .errors import AlignmentError, ExportError
from .mdemb import write_mdemb


@dataclass
class ExportJob:
    dataset: Path
    provider: str                 # bert | elmo (tests inject synthetic encoders)
    model: str
    out: Path
    device: str = "cpu"
    skip_bad: bool = False
    expected_dim: int | None = 1024  # the standard configuration; None disables the check


@dataclass
class ExportReport:
    written: int
    dim: int
    failures: list[tuple[str, str]] = field(default_factory=list)  # (example id, reason)

    def describe(self) -> str:
        lines = [f"wrote {self.written} records (dim {self.dim})"]
        for eid, reason in self.failures:
            lines.append(f"skipped {eid}: {reason}")
        return "\n".join(lines)


def export(job: ExportJob, encoder=None) -> ExportReport:
    """Embed every example and write the MDEMB1 file.

    Alignment failures abort the job (listing every offender) unless
    ``skip_bad`` is set, in which case the offending examples are left out
    and reported. Records land in sorted id order, so reruns are
    byte-identical.
    """
    records = read_dataset(job.dataset)
    if encoder is None:
        encoder = make_encoder(job.provider, job.model, job.device)
    if job.expected_dim is not None and encoder.dim != job.expected_dim:
        raise ExportError(
            f"encoder width {encoder.dim} does not match the expected dim "
            f"{job.expected_dim}; pass expected_dim=None to allow it"
        )
    matrices: dict[str, np.ndarray] = {}
    failures: list[tuple[str, str]] = []
    for record in sorted(records, key=lambda r: r.id):
        try:
            pieces, vectors = encoder.encode(record.tokens)
            mat = align_subwords(record.tokens, pieces, vectors, example_id=record.id)
        except AlignmentError as exc:
            failures.append((record.id, str(exc)))
            continue
        assert mat.shape == (len(record.tokens), encoder.dim)
        matrices[record.id] = mat
    if failures and not job.skip_bad:
        summary = "; ".join(eid for eid, _ in failures[:10])
        raise AlignmentError(
            f"{len(failures)} examples failed alignment ({summary}"
            f"{', ...' if len(failures) > 10 else ''}); rerun with --skip-bad to drop them"
        )
    provider = getattr(encoder, "provider", job.provider)
    write_mdemb(job.out, encoder.dim, provider, matrices)
    return ExportReport(written=len(matrices), dim=encoder.dim, failures=failures)
