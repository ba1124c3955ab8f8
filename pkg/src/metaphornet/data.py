"""Normalized dataset representation, JSONL I/O and fold generation.

The normalized format is one JSON object per line:
``{"id", "tokens", "label", "verb_index", "source"}`` with label 0 for
literal and 1 for metaphorical usage. Everything here is immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ArgumentError,
    EmptyDatasetError,
    IntegrityError,
    ParseError,
)

SOURCES = ("trofi", "mohx", "other")


@dataclass(frozen=True)
class Example:
    """One labeled sentence; ``verb_index`` points at the target verb token."""

    id: str
    tokens: tuple[str, ...]
    label: int
    verb_index: int | None = None
    source: str = "other"

    def __post_init__(self):
        if not self.id:
            raise ArgumentError("example id must be non-empty")
        if not self.tokens:
            raise ArgumentError(f"example {self.id!r}: tokens must be non-empty")
        if self.label not in (0, 1):
            raise ArgumentError(f"example {self.id!r}: label must be 0 or 1, got {self.label!r}")
        if self.verb_index is not None and not (0 <= self.verb_index < len(self.tokens)):
            raise ArgumentError(
                f"example {self.id!r}: verb_index {self.verb_index} out of range "
                f"for {len(self.tokens)} tokens"
            )
        if self.source not in SOURCES:
            raise ArgumentError(f"example {self.id!r}: unknown source {self.source!r}")
        object.__setattr__(self, "tokens", tuple(self.tokens))


@dataclass(frozen=True)
class Dataset:
    name: str
    examples: tuple[Example, ...]

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        seen: set[str] = set()
        for ex in self.examples:
            if ex.id in seen:
                raise IntegrityError(f"duplicate example id {ex.id!r} in dataset {self.name!r}")
            seen.add(ex.id)

    def __len__(self) -> int:
        return len(self.examples)

    def by_id(self) -> dict[str, Example]:
        return {ex.id: ex for ex in self.examples}

    def subset(self, ids, name: str | None = None) -> "Dataset":
        wanted = set(ids)
        return Dataset(name or self.name, tuple(ex for ex in self.examples if ex.id in wanted))


@dataclass(frozen=True)
class DatasetStats:
    count: int
    metaphor_fraction: float
    unique_verbs: int


@dataclass(frozen=True)
class FoldPlan:
    """A seeded stratified partition of example ids into k folds."""

    k: int
    folds: tuple[tuple[str, ...], ...]
    seed: int

    def train_ids(self, fold: int) -> tuple[str, ...]:
        return tuple(eid for i, f in enumerate(self.folds) if i != fold for eid in f)


def _example_from_obj(obj: dict, line_no: int) -> Example:
    for field_name in ("id", "tokens", "label"):
        if field_name not in obj:
            raise ParseError(f"line {line_no}: missing required field {field_name!r}")
    try:
        return Example(
            id=obj["id"],
            tokens=tuple(obj["tokens"]),
            label=obj["label"],
            verb_index=obj.get("verb_index"),
            source=obj.get("source", "other"),
        )
    except ArgumentError as exc:
        raise ParseError(f"line {line_no}: {exc}") from exc


def load_normalized(path) -> Dataset:
    """Load a normalized JSONL dataset, enforcing all invariants."""
    path = Path(path)
    examples: list[Example] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise ParseError(f"line {line_no}: expected a JSON object")
            examples.append(_example_from_obj(obj, line_no))
    return Dataset(path.stem, tuple(examples))


def write_normalized(dataset: Dataset, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for ex in dataset.examples:
            obj = {
                "id": ex.id,
                "tokens": list(ex.tokens),
                "label": ex.label,
                "verb_index": ex.verb_index,
                "source": ex.source,
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def dataset_stats(dataset: Dataset) -> DatasetStats:
    """Example count, metaphor fraction and number of distinct target verbs."""
    if not dataset.examples:
        raise EmptyDatasetError(f"dataset {dataset.name!r} has no examples")
    count = len(dataset.examples)
    metaphors = sum(ex.label for ex in dataset.examples)
    verbs = {
        ex.tokens[ex.verb_index].lower()
        for ex in dataset.examples
        if ex.verb_index is not None
    }
    return DatasetStats(count, metaphors / count, len(verbs))


def make_folds(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Seeded stratified k-fold partition.

    Positives and negatives are shuffled separately and dealt round-robin
    (negatives continuing where positives stopped), which keeps both fold
    sizes and per-fold metaphor counts within one of each other.
    """
    n = len(dataset.examples)
    if k < 2:
        raise ArgumentError(f"k must be at least 2, got {k}")
    if k > n:
        raise ArgumentError(f"k={k} exceeds dataset size {n}")
    rng = np.random.default_rng(seed)
    pos = [ex.id for ex in dataset.examples if ex.label == 1]
    neg = [ex.id for ex in dataset.examples if ex.label == 0]
    pos = [pos[i] for i in rng.permutation(len(pos))]
    neg = [neg[i] for i in rng.permutation(len(neg))]
    folds: list[list[str]] = [[] for _ in range(k)]
    for idx, eid in enumerate(pos + neg):
        folds[idx % k].append(eid)
    return FoldPlan(k=k, folds=tuple(tuple(f) for f in folds), seed=seed)


def write_fold_plan(plan: FoldPlan, path) -> None:
    obj = {"k": plan.k, "seed": plan.seed, "folds": [list(f) for f in plan.folds]}
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def load_fold_plan(path) -> FoldPlan:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return FoldPlan(k=obj["k"], folds=tuple(tuple(f) for f in obj["folds"]), seed=obj["seed"])
