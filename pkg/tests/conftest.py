"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately reimplement the math with plain loops so
they stay independent of the library code paths they check.
"""

from pathlib import Path

import numpy as np
import pytest

from keyrank import Candidate, RankConfig, ScoredInstance, score_instance

FIXTURE_CORPUS = Path(__file__).resolve().parent.parent / "data" / "fixture.jsonl"


@pytest.fixture
def fixture_corpus_path():
    return FIXTURE_CORPUS


def make_candidates(m, positions=None, names=None, embeddings=None):
    """Simple candidates c0..c{m-1} at increasing positions by default."""
    positions = positions if positions is not None else list(range(m))
    names = names if names is not None else [f"c{i}" for i in range(m)]
    out = []
    for i in range(m):
        emb = embeddings[i] if embeddings is not None else None
        out.append(Candidate(surface=names[i], normalized=names[i].casefold(),
                             position=positions[i], length_tokens=1,
                             embedding=emb))
    return out


def random_instance(rng, m, d=8, alpha=0.5, clamp=True):
    """Random instance built through score_instance, plus its candidates."""
    emb = rng.standard_normal((m, d))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    doc_vec = rng.standard_normal(d)
    doc_vec /= np.linalg.norm(doc_vec)
    candidates = make_candidates(m, embeddings=[emb[i] for i in range(m)])
    cfg = RankConfig(alpha=alpha, top_n=5, dim=d, clamp_similarity=clamp)
    return score_instance(candidates, doc_vec, cfg), candidates


def brute_objective(relevance, sim, alpha, subset):
    """Straight double-loop evaluation of the set objective."""
    subset = list(subset)
    total = 0.0
    for i in subset:
        total += relevance[i]
    penalty = 0.0
    for a in range(len(subset)):
        for b in range(a + 1, len(subset)):
            penalty += sim[subset[a]][subset[b]]
    return total - alpha * penalty


def reference_greedy(inst: ScoredInstance, candidates, top_n):
    """Straight-line greedy using brute-force objective differences.

    Independent of the kernel implementations: gains come from
    f(S + {x}) - f(S) evaluated by brute_objective, ties broken by
    (position, normalized form) directly on the candidate fields.
    """
    rel = np.asarray(inst.relevance)
    sim = np.asarray(inst.sim)
    m = rel.shape[0]
    selected = []
    gains = []
    remaining = set(range(m))
    base = 0.0
    for _ in range(min(top_n, m)):
        best = None
        best_gain = None
        best_key = None
        for x in sorted(remaining):
            gain = brute_objective(rel, sim, inst.alpha, selected + [x]) - base
            key = (candidates[x].position, candidates[x].normalized)
            if best is None or gain > best_gain or (gain == best_gain
                                                    and key < best_key):
                best, best_gain, best_key = x, gain, key
        selected.append(best)
        gains.append(best_gain)
        remaining.discard(best)
        base = brute_objective(rel, sim, inst.alpha, selected)
    return selected, gains


def flip_instance():
    """Adversarial fixture: the initially second-best candidate becomes
    worst after the first pick (relevances 0.9/0.85/0.6, sim(a,b)=0.95)."""
    relevance = np.array([0.9, 0.85, 0.6])
    sim = np.array([
        [0.0, 0.95, 0.0],
        [0.95, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ])
    inst = ScoredInstance(relevance=relevance, sim=sim, alpha=0.5, clamped=True)
    return inst, make_candidates(3, names=["a", "b", "c"])


def two_cluster_fixture():
    """Two tight candidate groups; the document sits near group one.

    Returns (candidates, gold, gold_embeddings, doc_vec). Group one has
    high relevance and high intra-group similarity; group two is
    orthogonal to it with moderate relevance, so small alpha keeps the
    selection inside group one and large alpha pushes it across groups.
    """
    delta = 0.1005
    def unit(v):
        v = np.asarray(v, dtype=np.float64)
        return v / np.linalg.norm(v)
    vectors = {
        "alpha one": unit([1.0, 0.0, delta, 0.0]),
        "alpha two": unit([1.0, 0.0, -delta, 0.0]),
        "beta one": unit([0.0, 1.0, 0.0, delta]),
        "beta two": unit([0.0, 1.0, 0.0, -delta]),
    }
    gold = list(vectors)
    candidates = []
    for i, name in enumerate(gold):
        candidates.append(Candidate(surface=name, normalized=name,
                                    position=i, length_tokens=2,
                                    embedding=vectors[name]))
    doc_vec = unit([1.0, 0.35, 0.0, 0.0])
    return candidates, gold, dict(vectors), doc_vec
