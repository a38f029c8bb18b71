"""Top-N keyphrase selection: greedy, lazy greedy, and an MMR comparator.

Greedy adds the candidate with the highest marginal gain at every step.
The lazy variant reuses cached gains as upper bounds (valid only when
similarities are clamped to be nonnegative) and produces output identical
to plain greedy, gain for gain. Ties are always broken by smaller
document position, then lexicographic normalized form, so runs are
reproducible and independent of candidate list order.

Selection is fixed-cardinality by default: exactly min(top_n, M) items
are emitted even when the best remaining gain is negative. Pass
``stop_when_negative=True`` to truncate at the first negative-gain step
instead.
"""

from __future__ import annotations

import time
from typing import Optional, Sequence

import numpy as np

from . import kernels, objective
from .model import Candidate, RankedSelection, SelectionItem
from .objective import ScoredInstance


def tie_break_ranks(candidates: Sequence[Candidate]) -> np.ndarray:
    """Dense rank of each candidate under (position, normalized form)."""
    order = sorted(range(len(candidates)),
                   key=lambda i: (candidates[i].position, candidates[i].normalized))
    ranks = np.empty(len(candidates), dtype=np.int64)
    for rank, idx in enumerate(order):
        ranks[idx] = rank
    return ranks


def _check_inputs(inst: ScoredInstance, candidates: Sequence[Candidate],
                  top_n: int) -> None:
    if len(candidates) != inst.size:
        raise ValueError(
            f"instance has {inst.size} rows but {len(candidates)} candidates")
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")


def _as_arrays(inst: ScoredInstance):
    rel = np.ascontiguousarray(inst.relevance, dtype=np.float64)
    sim = np.ascontiguousarray(inst.sim, dtype=np.float64)
    return rel, sim


def _build_selection(inst: ScoredInstance, candidates: Sequence[Candidate],
                     selected: np.ndarray, gains: np.ndarray,
                     objective_total: float, elapsed_ms: float) -> RankedSelection:
    items = tuple(
        SelectionItem(candidate=candidates[idx],
                      marginal_gain=float(gain),
                      relevance=float(inst.relevance[idx]))
        for idx, gain in zip(selected, gains))
    return RankedSelection(items=items, objective_value=objective_total,
                           elapsed_ms=elapsed_ms)


def _truncate_negative(selected: np.ndarray, gains: np.ndarray):
    for i, g in enumerate(gains):
        if g < 0.0:
            return selected[:i], gains[:i]
    return selected, gains


def greedy_rank(inst: ScoredInstance, candidates: Sequence[Candidate],
                top_n: int, *, stop_when_negative: bool = False,
                backend: Optional[str] = None) -> RankedSelection:
    """Select up to top_n candidates by straight greedy gain maximization."""
    _check_inputs(inst, candidates, top_n)
    rel, sim = _as_arrays(inst)
    ranks = tie_break_ranks(candidates)
    kern = kernels.get_backend(backend)
    start = time.perf_counter()
    selected, gains = kern.greedy_select(rel, sim, inst.alpha, top_n, ranks)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if stop_when_negative:
        selected, gains = _truncate_negative(selected, gains)
    total = objective.objective_value(inst, selected)
    return _build_selection(inst, candidates, selected, gains, total, elapsed_ms)


def lazy_greedy_rank(inst: ScoredInstance, candidates: Sequence[Candidate],
                     top_n: int, *, stop_when_negative: bool = False,
                     backend: Optional[str] = None) -> RankedSelection:
    """Greedy via cached-gain priority queue; output equals greedy_rank.

    Requires a clamped instance: with negative similarities the cached
    gains are no longer upper bounds and lazy evaluation could return a
    non-greedy answer, so that case is rejected outright.
    """
    if not inst.clamped:
        raise ValueError(
            "lazy_greedy_rank requires clamped similarities; "
            "use greedy_rank for unclamped instances")
    _check_inputs(inst, candidates, top_n)
    rel, sim = _as_arrays(inst)
    ranks = tie_break_ranks(candidates)
    kern = kernels.get_backend(backend)
    start = time.perf_counter()
    selected, gains = kern.lazy_greedy_select(rel, sim, inst.alpha, top_n, ranks)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if stop_when_negative:
        selected, gains = _truncate_negative(selected, gains)
    total = objective.objective_value(inst, selected)
    return _build_selection(inst, candidates, selected, gains, total, elapsed_ms)


def mmr_rank(inst: ScoredInstance, candidates: Sequence[Candidate],
             top_n: int, lam: float = 0.5, *,
             backend: Optional[str] = None) -> RankedSelection:
    """Max-marginal-relevance comparator.

    Scores lam * relevance - (1 - lam) * max similarity to the selected
    set, with the same tie-break as greedy. The stored gains are the MMR
    scores at selection time and objective_value is their sum (MMR does
    not optimize the greedy objective, so the telescoping identity is
    kept by definition here).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    _check_inputs(inst, candidates, top_n)
    rel, sim = _as_arrays(inst)
    ranks = tie_break_ranks(candidates)
    kern = kernels.get_backend(backend)
    start = time.perf_counter()
    selected, scores = kern.mmr_select(rel, sim, float(lam), top_n, ranks)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    total = float(scores.sum()) if scores.size else 0.0
    return _build_selection(inst, candidates, selected, scores, total, elapsed_ms)
