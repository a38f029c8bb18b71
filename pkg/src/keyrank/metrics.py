"""Evaluation metrics: P/R/F1 at N, intra-list distance, subtopic recall.

Matching between predicted and gold keyphrases is exact string equality
after case-folding and whitespace collapsing; in stemmed mode (the
default) a lightweight per-token suffix stripper is additionally applied
to both sides. Each gold keyphrase can be matched at most once.

Subtopic recall needs a notion of subtopics that gold annotations do not
carry, so gold keyphrases are clustered by single-link agglomeration:
any two keyphrases whose embeddings have cosine >= tau end up in the
same cluster. This construction (and tau = 0.7) is a documented artifact
convention, not something the datasets define.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .extraction import normalize_phrase
from .objective import cosine

EVAL_FIELDS = ("precision", "recall", "f1", "ild", "sr", "elapsed_ms")

# longest applicable suffix wins; the stem keeps at least two characters
_STEM_SUFFIXES = ("ing", "es", "ed", "s")


def light_stem(phrase: str) -> str:
    """Strip one plural/inflection suffix from each token of ``phrase``."""
    stemmed = []
    for token in normalize_phrase(phrase).split():
        for suffix in _STEM_SUFFIXES:
            if token.endswith(suffix) and len(token) - len(suffix) >= 2:
                token = token[:-len(suffix)]
                break
        stemmed.append(token)
    return " ".join(stemmed)


def _gold_list(gold: Iterable[str]) -> List[str]:
    if isinstance(gold, (set, frozenset)):
        return sorted(gold)
    return list(gold)


def match_keyphrases(predicted: Sequence[str], gold: Iterable[str],
                     stem: bool = True) -> set:
    """Return the set of gold keyphrases matched by ``predicted``.

    Predictions are consumed in order and each gold entry is matched at
    most once. A prediction matches a gold entry when their normalized
    forms are equal, or, with stem=True, when their stemmed forms are.
    """
    golds = _gold_list(gold)
    remaining = list(range(len(golds)))
    gold_norm = [normalize_phrase(g) for g in golds]
    gold_stem = [light_stem(g) for g in golds] if stem else None
    matched = set()
    for pred in predicted:
        p_norm = normalize_phrase(pred)
        p_stem = light_stem(pred) if stem else None
        for pos, gi in enumerate(remaining):
            if gold_norm[gi] == p_norm or (stem and gold_stem[gi] == p_stem):
                matched.add(golds[gi])
                del remaining[pos]
                break
    return matched


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf_at_n(predicted: Sequence[str], gold: Iterable[str], n: int,
             stem: bool = True) -> Tuple[float, float, float]:
    """Precision, recall, and F1 of the top-n predictions against gold.

    Precision divides by the number of predictions actually present in
    the top n (zero predictions give P = 0); recall divides by |gold|
    (empty gold gives R = 0).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    golds = _gold_list(gold)
    top = list(predicted)[:n]
    matched = match_keyphrases(top, golds, stem=stem)
    precision = len(matched) / len(top) if top else 0.0
    recall = len(matched) / len(golds) if golds else 0.0
    return precision, recall, f1_score(precision, recall)


def intra_list_distance(embeddings: Sequence) -> float:
    """Mean pairwise cosine distance 1 - cos over the list; 0 for k <= 1."""
    k = len(embeddings)
    if k <= 1:
        return 0.0
    total = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            total += 1.0 - cosine(embeddings[i], embeddings[j])
    return total * 2.0 / (k * (k - 1))


def cluster_gold(gold: Iterable[str], gold_embeddings: Mapping[str, np.ndarray],
                 tau: float) -> List[set]:
    """Single-link clusters of gold keyphrases at cosine threshold tau."""
    golds = _gold_list(gold)
    parent = list(range(len(golds)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(len(golds)):
        for j in range(i + 1, len(golds)):
            if cosine(gold_embeddings[golds[i]], gold_embeddings[golds[j]]) >= tau:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    clusters: Dict[int, set] = {}
    for i, g in enumerate(golds):
        clusters.setdefault(find(i), set()).add(g)
    return list(clusters.values())


def subtopic_recall(selected: Sequence, gold: Iterable[str],
                    gold_embeddings: Mapping[str, np.ndarray],
                    tau: float = 0.7, stem: bool = True) -> float:
    """Fraction of gold subtopic clusters covered by the selection.

    ``selected`` may hold Candidate objects or plain strings. A cluster
    counts as covered when any selected phrase matches any of its
    members under the same rule as match_keyphrases. Empty gold gives 0.
    Requires an embedding for every gold keyphrase.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    golds = _gold_list(gold)
    if not golds:
        return 0.0
    phrases = [getattr(c, "surface", c) for c in selected]
    sel_norm = {normalize_phrase(p) for p in phrases}
    sel_stem = {light_stem(p) for p in phrases} if stem else set()

    def covered(member: str) -> bool:
        if normalize_phrase(member) in sel_norm:
            return True
        return stem and light_stem(member) in sel_stem

    clusters = cluster_gold(golds, gold_embeddings, tau)
    hit = sum(1 for cluster in clusters if any(covered(g) for g in cluster))
    return hit / len(clusters)


@dataclass(frozen=True)
class DocumentEval:
    """Per-document evaluation record."""

    doc_id: str
    precision: float
    recall: float
    f1: float
    ild: float
    sr: float
    elapsed_ms: float

    def metrics(self) -> Dict[str, float]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "ild": self.ild,
            "sr": self.sr,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass(frozen=True)
class EvalReport:
    """Per-document rows plus corpus-level aggregates."""

    per_doc: tuple
    aggregate: Dict[str, float]


def aggregate_evals(per_doc: Sequence[DocumentEval],
                    micro: bool = False,
                    micro_counts: Sequence[Tuple[int, int, int]] = ()) -> Dict[str, float]:
    """Aggregate per-document metrics over the corpus.

    Macro (default): plain mean of each per-document metric. Micro:
    P/R/F1 are recomputed from pooled (matched, predicted, gold) counts,
    which must be supplied; ILD, SR, and elapsed_ms stay macro-averaged.
    """
    if not per_doc:
        return {field: 0.0 for field in EVAL_FIELDS}
    agg = {field: float(np.mean([row.metrics()[field] for row in per_doc]))
           for field in EVAL_FIELDS}
    if micro:
        if len(micro_counts) != len(per_doc):
            raise ValueError("micro aggregation needs one count triple per document")
        matched = sum(c[0] for c in micro_counts)
        predicted = sum(c[1] for c in micro_counts)
        gold = sum(c[2] for c in micro_counts)
        agg["precision"] = matched / predicted if predicted else 0.0
        agg["recall"] = matched / gold if gold else 0.0
        agg["f1"] = f1_score(agg["precision"], agg["recall"])
    return agg
