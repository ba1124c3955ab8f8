"""Minimal reader for the normalized dataset interchange format.

One JSON object per line with at least ``id`` and ``tokens``; everything
else in the line is ignored here. This is the exporter's own
implementation of the shared file interface, deliberately independent of
the consumer package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetError


@dataclass(frozen=True)
class SentenceRecord:
    id: str
    tokens: tuple[str, ...]


def read_dataset(path) -> list[SentenceRecord]:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    records: list[SentenceRecord] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}: line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict) or "id" not in obj or "tokens" not in obj:
                raise DatasetError(f"{path}: line {line_no}: need 'id' and 'tokens' fields")
            tokens = tuple(obj["tokens"])
            if not tokens:
                raise DatasetError(f"{path}: line {line_no}: empty token list")
            if obj["id"] in seen:
                raise DatasetError(f"{path}: line {line_no}: duplicate id {obj['id']!r}")
            seen.add(obj["id"])
            records.append(SentenceRecord(id=obj["id"], tokens=tokens))
    if not records:
        raise DatasetError(f"{path}: no examples")
    return records
