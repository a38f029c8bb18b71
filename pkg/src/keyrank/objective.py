"""The set objective: relevance minus an alpha-weighted similarity penalty.

For a candidate set S the objective is

    f(S) = sum_{i in S} relevance[i] - alpha * sum_{i<j in S} sim[i][j]

with the penalty over unordered pairs inside S. Relevance is the cosine
of a candidate embedding against the document embedding; pairwise
similarity is candidate-candidate cosine, floored at 0 when clamping is
on. Clamping is what makes marginal gains non-increasing as S grows, so
the lazy ranker requires it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import RankConfig
from .model import Candidate


def cosine(a, b) -> float:
    """Cosine similarity with the zero-vector convention cos(x, 0) = 0."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


@dataclass(frozen=True)
class ScoredInstance:
    """Per-document scoring arrays consumed by the rankers.

    ``relevance`` has one entry per candidate; ``sim`` is the symmetric
    candidate-candidate similarity matrix with a zeroed diagonal (the
    diagonal is excluded from the objective and never read). When
    ``clamped`` is set, all sim entries are >= 0.
    """

    relevance: np.ndarray
    sim: np.ndarray
    alpha: float
    clamped: bool

    @property
    def size(self) -> int:
        return int(self.relevance.shape[0])


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return matrix / safe


def score_instance(candidates: Sequence[Candidate], doc_embedding,
                   cfg: RankConfig) -> ScoredInstance:
    """Build relevance and pairwise-similarity arrays for one document.

    All candidates must carry embeddings of the same dimension as the
    document embedding. Cosines are scale-invariant, so inputs need not
    be unit-norm. The sim matrix is made exactly symmetric by mirroring
    its upper triangle.
    """
    doc = np.asarray(doc_embedding, dtype=np.float64)
    if doc.ndim != 1:
        raise ValueError(f"document embedding must be 1-D, got {doc.shape}")
    dim = doc.shape[0]
    rows = []
    for c in candidates:
        if c.embedding is None:
            raise ValueError(f"candidate {c.normalized!r} has no embedding")
        v = np.asarray(c.embedding, dtype=np.float64)
        if v.shape != (dim,):
            raise ValueError(
                f"candidate {c.normalized!r} embedding dim {v.shape[0]} "
                f"does not match document dim {dim}")
        rows.append(v)
    m = len(rows)
    emb = np.vstack(rows) if m else np.zeros((0, dim))

    unit = _unit_rows(emb)
    dnorm = float(np.linalg.norm(doc))
    dunit = doc / dnorm if dnorm != 0.0 else np.zeros_like(doc)
    relevance = unit @ dunit

    gram = unit @ unit.T
    upper = np.triu(gram, 1)
    sim = upper + upper.T
    if cfg.clamp_similarity:
        sim = np.maximum(sim, 0.0)
    relevance.flags.writeable = False
    sim.flags.writeable = False
    return ScoredInstance(relevance=relevance, sim=sim,
                          alpha=float(cfg.alpha), clamped=cfg.clamp_similarity)


def _index_array(inst: ScoredInstance, subset: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.fromiter(subset, dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= inst.size):
        raise IndexError(
            f"subset indices out of range for instance of size {inst.size}")
    return idx


def objective_value(inst: ScoredInstance, subset: Iterable[int]) -> float:
    """Evaluate f on a subset of candidate indices. f(empty) = 0."""
    idx = _index_array(inst, subset)
    if idx.size == 0:
        return 0.0
    rel = float(inst.relevance[idx].sum())
    sub = inst.sim[np.ix_(idx, idx)]
    pair = float(np.triu(sub, 1).sum())
    return rel - inst.alpha * pair


def marginal_gain(inst: ScoredInstance, subset: Iterable[int], x: int) -> float:
    """Gain of adding ``x`` to ``subset``: relevance[x] - alpha * sum sim[x][y].

    Equals objective_value(subset + {x}) - objective_value(subset) within
    1e-12; the closed form avoids re-walking the pair sum.
    """
    idx = _index_array(inst, subset)
    if x < 0 or x >= inst.size:
        raise IndexError(f"index {x} out of range for instance of size {inst.size}")
    if idx.size and bool(np.isin(x, idx)):
        raise ValueError(f"index {x} is already in the subset")
    penalty = float(inst.sim[x, idx].sum()) if idx.size else 0.0
    return float(inst.relevance[x]) - inst.alpha * penalty
