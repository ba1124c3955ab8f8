"""Subword-to-word alignment by arithmetic mean.

Pretrained tokenizers emit subword pieces; the downstream model wants one
vector per whitespace token. Each word vector is the mean of its pieces'
vectors (order-independent), with continuation/start markers stripped
before matching. Matching is case-insensitive since uncased checkpoints
lowercase their input.
"""

from __future__ import annotations

import numpy as np

from .errors import AlignmentError


def strip_marker(piece: str) -> str:
    if piece.startswith("##"):  # wordpiece continuation
        return piece[2:]
    if piece.startswith("▁"):  # sentencepiece word start
        return piece[1:]
    return piece


def align_subwords(
    word_tokens,
    subword_tokens,
    subword_vectors: np.ndarray,
    example_id: str = "?",
) -> np.ndarray:
    """Map [n_subwords x dim] vectors onto the word tokens; returns [n_words x dim]."""
    vectors = np.asarray(subword_vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != len(subword_tokens):
        raise AlignmentError(
            f"example {example_id!r}: got {len(subword_tokens)} subword tokens but "
            f"vector block of shape {vectors.shape}"
        )
    out = np.empty((len(word_tokens), vectors.shape[1]))
    cursor = 0
    for w, word in enumerate(word_tokens):
        target = word.casefold()
        assembled = ""
        start = cursor
        while assembled != target:
            if cursor >= len(subword_tokens) or len(assembled) > len(target):
                raise AlignmentError(
                    f"example {example_id!r}: subwords do not reconstruct word "
                    f"{word!r} (got {subword_tokens[start:cursor + 1]!r})"
                )
            assembled += strip_marker(subword_tokens[cursor]).casefold()
            cursor += 1
        out[w] = vectors[start:cursor].mean(axis=0)
    if cursor != len(subword_tokens):
        raise AlignmentError(
            f"example {example_id!r}: {len(subword_tokens) - cursor} subword pieces "
            f"left over after the last word"
        )
    return out
