"""Per-document pipeline: extract -> embed -> score -> rank.

This is the unit of work the CLI fans out over worker threads. Every
stage is timed separately so the bench command can report them; the
ranking payload itself is deterministic given (document, config, seed,
provider).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import extraction, ranker
from .config import RankConfig, RunSettings
from .embedding import (HashEmbedding, RemoteEmbedding, embed_batch,
                        embed_document, project)
from .model import Candidate, Document, RankedSelection
from .objective import ScoredInstance, score_instance


@dataclass(frozen=True)
class StageTimes:
    """Wall-clock milliseconds per pipeline stage."""

    extract_ms: float
    embed_ms: float
    score_ms: float
    rank_ms: float

    @property
    def total_ms(self) -> float:
        return self.extract_ms + self.embed_ms + self.score_ms + self.rank_ms


@dataclass(frozen=True)
class DocumentRun:
    """Everything produced for one ranked document."""

    doc: Document
    candidates: tuple
    instance: ScoredInstance
    selection: RankedSelection
    times: StageTimes


def build_provider(settings: RunSettings, seed: int):
    """Instantiate the embedding provider named in the settings."""
    if settings.provider == "hash":
        return HashEmbedding(dim=settings.rank.dim, seed=seed)
    if settings.provider == "remote":
        return RemoteEmbedding(settings.endpoint)
    raise ValueError(
        f"unknown provider {settings.provider!r}; expected 'hash' or 'remote'")


def extract_for_document(doc: Document, cfg: RankConfig) -> list:
    """Candidate extraction honoring pre-tagged input when present."""
    return extraction.extract_candidates(
        text=doc.text, tokens=doc.tokens,
        max_phrase_tokens=cfg.max_phrase_tokens)


def embed_candidates(provider, candidates: Sequence[Candidate],
                     cfg: RankConfig, seed: int) -> list:
    """Embed candidate phrases and project them to the configured dim."""
    vectors = embed_batch(provider, [c.normalized for c in candidates])
    if provider.native_dim != cfg.dim:
        vectors = [project(v, cfg.dim, seed) for v in vectors]
    return [c.with_embedding(v) for c, v in zip(candidates, vectors)]


def rank_document(doc: Document, cfg: RankConfig, provider, *,
                  lazy: bool = False, seed: int = 42,
                  method: str = "greedy", mmr_lambda: float = 0.5,
                  backend: Optional[str] = None) -> DocumentRun:
    """Run the full pipeline on one document.

    ``method`` is "greedy" (optionally lazy) or "mmr". A document with no
    noun phrases yields an empty selection, not an error.
    """
    t0 = time.perf_counter()
    candidates = extract_for_document(doc, cfg)
    t1 = time.perf_counter()

    candidates = embed_candidates(provider, candidates, cfg, seed)
    doc_vec = embed_document(provider, doc)
    if provider.native_dim != cfg.dim:
        doc_vec = project(doc_vec, cfg.dim, seed)
    t2 = time.perf_counter()

    inst = score_instance(candidates, doc_vec, cfg)
    t3 = time.perf_counter()

    if method == "greedy":
        if lazy:
            selection = ranker.lazy_greedy_rank(inst, candidates, cfg.top_n,
                                                backend=backend)
        else:
            selection = ranker.greedy_rank(inst, candidates, cfg.top_n,
                                           backend=backend)
    elif method == "mmr":
        selection = ranker.mmr_rank(inst, candidates, cfg.top_n, mmr_lambda,
                                    backend=backend)
    else:
        raise ValueError(f"unknown ranking method {method!r}")
    t4 = time.perf_counter()

    times = StageTimes(
        extract_ms=(t1 - t0) * 1000.0,
        embed_ms=(t2 - t1) * 1000.0,
        score_ms=(t3 - t2) * 1000.0,
        rank_ms=(t4 - t3) * 1000.0,
    )
    return DocumentRun(doc=doc.with_embedding(doc_vec),
                       candidates=tuple(candidates),
                       instance=inst, selection=selection, times=times)
