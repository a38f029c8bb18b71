"""Shared immutable data types used across the ranking pipeline.

Everything here is frozen after construction and safe to share between
concurrent workers. Embedding vectors are plain 1-D float64 numpy arrays;
by convention they are either L2-normalized or exactly zero (the zero
vector stands in for empty text and takes cosine 0 against anything).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

COARSE_TAGS = ("NOUN", "ADJ", "VERB", "OTHER")

#: tolerance for the unit-norm convention on provider output
NORM_TOLERANCE = 1e-6


def as_embedding(values, dim: Optional[int] = None) -> np.ndarray:
    """Validate ``values`` as an embedding vector and return it as float64.

    Checks the conventions every provider output must satisfy: 1-D, all
    entries finite, and either L2-normalized within ``NORM_TOLERANCE`` or
    exactly zero. When ``dim`` is given the length must match it.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"embedding must be 1-D, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"embedding has dim {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("embedding contains non-finite entries")
    norm = float(np.linalg.norm(v))
    if norm != 0.0 and abs(norm - 1.0) > NORM_TOLERANCE:
        raise ValueError(
            f"embedding norm {norm} is neither 0 nor 1 within {NORM_TOLERANCE}")
    return v


@dataclass(frozen=True)
class Candidate:
    """A candidate keyphrase extracted from one document.

    ``surface`` keeps the original token spelling for display; ``normalized``
    is the case-folded, whitespace-collapsed form used for deduplication and
    matching. ``position`` is the 0-based index of the span's first token in
    the document. The embedding is attached later by the embedding stage and
    never participates in equality.
    """

    surface: str
    normalized: str
    position: int
    length_tokens: int
    embedding: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.normalized:
            raise ValueError("candidate normalized form must be nonempty")
        if self.normalized != " ".join(self.normalized.split()):
            raise ValueError(
                f"normalized form {self.normalized!r} has stray whitespace")
        if self.position < 0:
            raise ValueError(f"position must be >= 0, got {self.position}")
        if self.length_tokens < 1:
            raise ValueError(
                f"length_tokens must be >= 1, got {self.length_tokens}")

    def with_embedding(self, vector: np.ndarray) -> "Candidate":
        return dataclasses.replace(self, embedding=vector)


@dataclass(frozen=True)
class Document:
    """One input document, optionally pre-tagged and optionally with gold keys.

    ``tokens`` holds (text, tag) pairs with tags from the coarse set
    {NOUN, ADJ, VERB, OTHER}; when present, extraction uses them verbatim
    instead of running the bundled tokenizer and tagger. ``gold`` keeps the
    gold keyphrases in source order, untouched by any normalization.
    """

    id: str
    text: str
    tokens: Optional[tuple] = None
    gold: Optional[tuple] = None
    embedding: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be nonempty")
        if self.tokens is not None:
            for i, pair in enumerate(self.tokens):
                text, tag = pair
                if tag not in COARSE_TAGS:
                    raise ValueError(
                        f"document {self.id!r}: token {i} has tag {tag!r}, "
                        f"expected one of {COARSE_TAGS}")
                if not text or text.split() != [text]:
                    raise ValueError(
                        f"document {self.id!r}: token {i} text {text!r} is "
                        "empty or contains whitespace")

    def with_embedding(self, vector: np.ndarray) -> "Document":
        return dataclasses.replace(self, embedding=vector)


@dataclass(frozen=True)
class SelectionItem:
    """One selected keyphrase with its selection-time scores."""

    candidate: Candidate
    marginal_gain: float
    relevance: float


@dataclass(frozen=True)
class RankedSelection:
    """Ordered output of a ranking run.

    ``items`` are in selection order. ``objective_value`` is the value of
    the ranking objective on the final selected set, which telescopes to the
    sum of the per-step marginal gains (within 1e-9). ``elapsed_ms`` is the
    wall-clock time of the selection loop only.
    """

    items: tuple
    objective_value: float
    elapsed_ms: float

    def __post_init__(self):
        seen = set()
        for item in self.items:
            key = item.candidate.normalized
            if key in seen:
                raise ValueError(f"candidate {key!r} selected twice")
            seen.add(key)

    def keyphrases(self) -> list:
        return [item.candidate.surface for item in self.items]

    def gains(self) -> list:
        return [item.marginal_gain for item in self.items]

    def relevances(self) -> list:
        return [item.relevance for item in self.items]
