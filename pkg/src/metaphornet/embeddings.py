"""Frozen per-token embedding matrices and the MDEMB1 file format.

MDEMB1 layout (little-endian, no padding):
  magic   8 bytes  b"MDEMB1\\0\\0"
  dim     u32
  count   u32      number of records
  provider u8      0=bert, 1=elmo, 2=synthetic
  records, each:
    id_len  u16
    id      id_len UTF-8 bytes
    n_tok   u32
    values  n_tok * dim float32, row-major

Values are stored in 32-bit and widened to float64 in memory. Records are
written in lexicographic id order so identical sets serialize to identical
bytes.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset
from .errors import ArgumentError, CorruptionError, FormatError

MAGIC = b"MDEMB1\x00\x00"
PROVIDER_CODES = {"bert": 0, "elmo": 1, "synthetic": 2}
_CODE_PROVIDERS = {v: k for k, v in PROVIDER_CODES.items()}


@dataclass
class EmbeddingSet:
    """Per-example [n_tokens x dim] float64 matrices keyed by example id."""

    dim: int
    provider: str
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if self.provider not in PROVIDER_CODES:
            raise ArgumentError(f"unknown embedding provider {self.provider!r}")


@dataclass(frozen=True)
class CoverageReport:
    missing: tuple[str, ...]
    extra: tuple[str, ...]
    mismatched: tuple[tuple[str, int, int], ...]  # (id, expected_rows, found_rows)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.mismatched)

    def describe(self) -> str:
        if self.ok:
            return "embeddings cover the dataset"
        lines = []
        if self.missing:
            lines.append(f"missing embeddings for {len(self.missing)} ids: {list(self.missing[:5])}...")
        if self.extra:
            lines.append(f"{len(self.extra)} embedding ids not in the dataset: {list(self.extra[:5])}...")
        for eid, want, got in self.mismatched[:5]:
            lines.append(f"id {eid!r}: expected {want} token rows, found {got}")
        if len(self.mismatched) > 5:
            lines.append(f"... and {len(self.mismatched) - 5} more row-count mismatches")
        return "\n".join(lines)


def write_embeddings(embeddings: EmbeddingSet, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ids = sorted(embeddings.vectors)
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", embeddings.dim, len(ids)))
        fh.write(struct.pack("<B", PROVIDER_CODES[embeddings.provider]))
        for eid in ids:
            mat = np.asarray(embeddings.vectors[eid])
            if mat.ndim != 2 or mat.shape[1] != embeddings.dim:
                raise ArgumentError(
                    f"id {eid!r}: expected [n_tokens x {embeddings.dim}] matrix, got shape {mat.shape}"
                )
            raw = eid.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", mat.shape[0]))
            fh.write(mat.astype("<f4").tobytes(order="C"))


def load_embeddings(path) -> EmbeddingSet:
    """Read an MDEMB1 file, widening values to float64."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < len(MAGIC) or blob[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: not an MDEMB1 file (bad magic)")
    offset = len(MAGIC)

    def take(n: int, what: str) -> bytes:
        nonlocal offset
        if offset + n > len(blob):
            raise CorruptionError(f"{path}: truncated {what} at byte offset {offset}")
        chunk = blob[offset : offset + n]
        offset += n
        return chunk

    dim, count = struct.unpack("<II", take(8, "header"))
    (provider_code,) = struct.unpack("<B", take(1, "header"))
    if provider_code not in _CODE_PROVIDERS:
        raise FormatError(f"{path}: unknown provider code {provider_code}")
    vectors: dict[str, np.ndarray] = {}
    for _ in range(count):
        (id_len,) = struct.unpack("<H", take(2, "record id length"))
        eid = take(id_len, "record id").decode("utf-8")
        (n_tok,) = struct.unpack("<I", take(4, "record token count"))
        value_offset = offset
        raw = take(4 * n_tok * dim, f"record values for id {eid!r}")
        mat = np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(n_tok, dim)
        if not np.isfinite(mat).all():
            raise CorruptionError(f"{path}: non-finite values in record {eid!r} at byte offset {value_offset}")
        if eid in vectors:
            raise CorruptionError(f"{path}: duplicate record id {eid!r}")
        vectors[eid] = mat
    if offset != len(blob):
        raise CorruptionError(
            f"{path}: {len(blob) - offset} trailing bytes after the {count} records "
            f"declared in the header (byte offset {offset})"
        )
    return EmbeddingSet(dim=dim, provider=_CODE_PROVIDERS[provider_code], vectors=vectors)


def _unit_from_key(key: str, dim: int) -> np.ndarray:
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def synth_embeddings(dataset: Dataset, dim: int, seed: int, separability: float) -> EmbeddingSet:
    """Deterministic stand-in embeddings for offline tests and demos.

    Each token vector is a unit-norm pseudorandom vector keyed by
    (seed, example id, position) plus ``separability`` times a fixed label
    direction whose sign follows the example label. At separability 0 the
    vectors carry no label information at all.
    """
    if dim < 1:
        raise ArgumentError(f"dim must be positive, got {dim}")
    if not (0.0 <= separability <= 1.0):
        raise ArgumentError(f"separability must lie in [0, 1], got {separability}")
    label_dir = _unit_from_key(f"label-direction|{seed}", dim)
    vectors: dict[str, np.ndarray] = {}
    for ex in dataset.examples:
        sign = 1.0 if ex.label == 1 else -1.0
        rows = np.empty((len(ex.tokens), dim))
        for t in range(len(ex.tokens)):
            rows[t] = _unit_from_key(f"{seed}|{ex.id}|{t}", dim)
        if separability != 0.0:
            rows += separability * sign * label_dir
        # Quantize to the 32-bit storage precision so in-memory and
        # file-round-tripped sets are value-identical.
        vectors[ex.id] = rows.astype(np.float32).astype(np.float64)
    return EmbeddingSet(dim=dim, provider="synthetic", vectors=vectors)


def validate_coverage(embeddings: EmbeddingSet, dataset: Dataset) -> CoverageReport:
    """Report missing ids, extra ids and token-row mismatches; empty == compatible."""
    missing: list[str] = []
    mismatched: list[tuple[str, int, int]] = []
    ids = set()
    for ex in dataset.examples:
        ids.add(ex.id)
        mat = embeddings.vectors.get(ex.id)
        if mat is None:
            missing.append(ex.id)
        elif mat.shape[0] != len(ex.tokens):
            mismatched.append((ex.id, len(ex.tokens), mat.shape[0]))
    extra = sorted(set(embeddings.vectors) - ids)
    return CoverageReport(tuple(missing), tuple(extra), tuple(mismatched))
