"""Converters from the TroFi and MOH-X native layouts to normalized JSONL.

TroFi ships as a plain-text example base: per-verb sections headed by
``***verb***``, each holding ``*literal cluster*`` / ``*nonliteral
cluster*`` blocks whose lines read ``<sentence-id>\\t<tag>\\t<sentence>``.
Cluster membership decides the label (literal=0, nonliteral=1); sentences
in any other cluster are dropped and counted. MOH-X ships as a CSV with at
least ``term`` (or ``verb``), ``sentence`` and ``label`` columns, plus an
optional ``verb_idx``.

Tokenization is whitespace splitting; the source files already separate
punctuation.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

from .data import Dataset, Example, dataset_stats
from .errors import ConversionError

# Table-style reference statistics for the two benchmark corpora:
# (examples, metaphor fraction, unique verbs). Used only to flag
# discrepancies in the conversion report, never to alter the data.
CANONICAL_STATS = {
    "trofi": (3737, 0.43, 50),
    "mohx": (647, 0.49, 214),
}

_SECTION_RE = re.compile(r"^\*{3}(?P<verb>[^*]+)\*{3}\s*$")
_CLUSTER_RE = re.compile(r"^\*(?P<kind>[^*]+?)\s+cluster\*\s*$")

_INFLECTION_SUFFIXES = ("", "s", "es", "ed", "d", "ing", "n")


@dataclass
class ConversionReport:
    source: str
    examples: int = 0
    dropped: int = 0
    dropped_clusters: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def describe(self) -> str:
        lines = [f"converted {self.examples} examples from {self.source}"]
        if self.dropped:
            kinds = ", ".join(sorted(set(self.dropped_clusters)))
            lines.append(f"dropped {self.dropped} sentences from unlabeled clusters ({kinds})")
        lines.extend(self.notes)
        return "\n".join(lines)


@dataclass
class ConversionResult:
    dataset: Dataset
    report: ConversionReport


def _verb_stems(verb: str) -> tuple[str, ...]:
    stems = [verb]
    if verb.endswith("e"):
        stems.append(verb[:-1])
    stems.append(verb + verb[-1])  # doubled final consonant: grab -> grabbed
    return tuple(stems)


def locate_verb(tokens, verb: str) -> int | None:
    """Index of the first token matching the verb or a simple inflection."""
    verb = verb.lower()
    lowered = [t.lower() for t in tokens]
    if verb in lowered:
        return lowered.index(verb)
    for i, tok in enumerate(lowered):
        for stem in _verb_stems(verb):
            if tok.startswith(stem) and tok[len(stem):] in _INFLECTION_SUFFIXES:
                return i
    return None


def _append_canon_note(report: ConversionReport, dataset: Dataset) -> None:
    canon = CANONICAL_STATS.get(report.source)
    if canon is None or not dataset.examples:
        return
    count, frac, verbs = canon
    stats = dataset_stats(dataset)
    if stats.count != count or stats.unique_verbs != verbs or abs(stats.metaphor_fraction - frac) > 0.005:
        report.notes += (
            f"warning: statistics ({stats.count} examples, "
            f"{stats.metaphor_fraction:.3f} metaphor, {stats.unique_verbs} verbs) "
            f"differ from the published {report.source} card "
            f"({count}, {frac:.2f}, {verbs}); check the raw file variant",
        )


def convert_trofi(raw_path) -> ConversionResult:
    """Parse a TroFi-style example base into a normalized dataset."""
    raw_path = Path(raw_path)
    text = raw_path.read_text(encoding="utf-8")
    examples: list[Example] = []
    report = ConversionReport(source="trofi")
    dropped_kinds: list[str] = []

    verb: str | None = None
    label: int | None = None  # None while inside an unlabeled/unknown cluster
    in_known_cluster = False

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        section = _SECTION_RE.match(stripped)
        if section:
            verb = section.group("verb").strip().lower()
            label = None
            in_known_cluster = False
            continue
        cluster = _CLUSTER_RE.match(stripped)
        if cluster:
            if verb is None:
                raise ConversionError(f"line {line_no}: cluster before any verb section: {stripped!r}")
            kind = cluster.group("kind").strip().lower()
            if kind == "nonliteral":
                label, in_known_cluster = 1, True
            elif kind == "literal":
                label, in_known_cluster = 0, True
            else:
                label, in_known_cluster = None, False
                dropped_kinds.append(kind)
            continue
        if verb is None:
            raise ConversionError(f"line {line_no}: unrecognized structure outside any section: {stripped!r}")
        parts = re.split(r"\t+", stripped, maxsplit=2)
        if len(parts) != 3:
            raise ConversionError(f"line {line_no}: expected 'id<TAB>tag<TAB>sentence', got {stripped!r}")
        sent_id, _tag, sentence = (p.strip() for p in parts)
        if not in_known_cluster:
            report.dropped += 1
            continue
        tokens = tuple(sentence.split())
        if not tokens:
            raise ConversionError(f"line {line_no}: empty sentence for id {sent_id!r}")
        verb_index = locate_verb(tokens, verb)
        if verb_index is None:
            raise ConversionError(
                f"line {line_no}: target verb {verb!r} not found in sentence {sentence!r}"
            )
        examples.append(
            Example(
                id=f"{verb}:{sent_id}",
                tokens=tokens,
                label=label,
                verb_index=verb_index,
                source="trofi",
            )
        )

    if not examples:
        raise ConversionError(f"{raw_path}: no labeled sentences found")
    dataset = Dataset("trofi", tuple(examples))
    report.examples = len(examples)
    report.dropped_clusters = tuple(dropped_kinds)
    _append_canon_note(report, dataset)
    return ConversionResult(dataset, report)


def convert_mohx(raw_path) -> ConversionResult:
    """Parse a MOH-X style CSV into a normalized dataset."""
    raw_path = Path(raw_path)
    examples: list[Example] = []
    report = ConversionReport(source="mohx")
    with raw_path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ConversionError(f"{raw_path}: empty file, expected a CSV header")
        fields = {name.strip().lower(): name for name in reader.fieldnames}
        verb_col = fields.get("term") or fields.get("verb")
        sent_col = fields.get("sentence")
        label_col = fields.get("label")
        if verb_col is None or sent_col is None or label_col is None:
            raise ConversionError(
                f"{raw_path}: header must contain term/verb, sentence and label columns, "
                f"got {reader.fieldnames!r}"
            )
        idx_col = fields.get("verb_idx")
        for row_no, row in enumerate(reader, start=2):
            sentence = (row[sent_col] or "").strip()
            tokens = tuple(sentence.split())
            if not tokens:
                raise ConversionError(f"row {row_no}: empty sentence: {row!r}")
            raw_label = (row[label_col] or "").strip()
            if raw_label not in ("0", "1"):
                raise ConversionError(f"row {row_no}: label must be 0 or 1, got {raw_label!r}")
            verb = (row[verb_col] or "").strip().lower()
            if not verb:
                raise ConversionError(f"row {row_no}: empty verb: {row!r}")
            if idx_col is not None and (row[idx_col] or "").strip():
                verb_index = int(row[idx_col])
                if not (0 <= verb_index < len(tokens)):
                    raise ConversionError(
                        f"row {row_no}: verb_idx {verb_index} out of range for {len(tokens)} tokens"
                    )
            else:
                verb_index = locate_verb(tokens, verb)
                if verb_index is None:
                    raise ConversionError(
                        f"row {row_no}: target verb {verb!r} not found in sentence {sentence!r}"
                    )
            examples.append(
                Example(
                    id=f"mohx:{row_no - 2:04d}",
                    tokens=tokens,
                    label=int(raw_label),
                    verb_index=verb_index,
                    source="mohx",
                )
            )
    if not examples:
        raise ConversionError(f"{raw_path}: no rows found")
    dataset = Dataset("mohx", tuple(examples))
    report.examples = len(examples)
    _append_canon_note(report, dataset)
    return ConversionResult(dataset, report)
