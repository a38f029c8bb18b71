"""Pure-Python (numpy) selection kernels.

Fallback used when the compiled extension is unavailable. Every function
here is arithmetic-identical to its compiled twin: same expressions, same
accumulation order, so the two backends produce bit-equal gains and the
same selections. Inputs are trusted (validated by the ranker wrappers).

Heap entries in the lazy kernel are (-cached_gain, tie_rank, index, stamp)
where stamp is the selection count at which cached_gain was computed; a
popped entry is fresh exactly when its stamp equals the current count.
"""

from __future__ import annotations

import heapq

import numpy as np

BACKEND_NAME = "python"


def _argbest(gains: np.ndarray, active: np.ndarray, tie_rank: np.ndarray) -> int:
    masked = np.where(active, gains, -np.inf)
    best = masked.max()
    ties = np.flatnonzero(masked == best)
    if ties.size > 1:
        return int(ties[np.argmin(tie_rank[ties])])
    return int(ties[0])


def greedy_select(relevance, sim, alpha, top_n, tie_rank):
    """Plain greedy: each step takes the argmax marginal gain.

    Returns (selected indices, gains), both of length min(top_n, m).
    """
    m = relevance.shape[0]
    k = min(int(top_n), m)
    selected = np.empty(k, dtype=np.int64)
    gains = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected, gains
    penalty = np.zeros(m, dtype=np.float64)
    active = np.ones(m, dtype=bool)
    for step in range(k):
        current = relevance - alpha * penalty
        pick = _argbest(current, active, tie_rank)
        selected[step] = pick
        gains[step] = current[pick]
        active[pick] = False
        penalty += sim[pick]
    return selected, gains


def lazy_greedy_select(relevance, sim, alpha, top_n, tie_rank):
    """Lazy greedy over a max-heap of cached gains.

    Cached gains are upper bounds when sim is nonnegative, so the top
    entry, once fresh, is the true argmax. Output is identical to
    greedy_select, element for element.
    """
    m = relevance.shape[0]
    k = min(int(top_n), m)
    selected = np.empty(k, dtype=np.int64)
    gains = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected, gains
    heap = [(-float(relevance[x]), int(tie_rank[x]), x, 0) for x in range(m)]
    heapq.heapify(heap)
    count = 0
    while count < k:
        neg_gain, tie, x, stamp = heapq.heappop(heap)
        if stamp == count:
            selected[count] = x
            gains[count] = -neg_gain
            count += 1
            continue
        # stale: recompute against the current selection, in selection
        # order (keeps the accumulation bit-identical to greedy_select)
        p = 0.0
        for t in range(count):
            p += sim[x, selected[t]]
        g = relevance[x] - alpha * p
        heapq.heappush(heap, (-float(g), tie, x, count))
    return selected, gains


def mmr_select(relevance, sim, lam, top_n, tie_rank):
    """Max-marginal-relevance selection.

    Score of x is lam * relevance[x] - (1 - lam) * max_{y selected} sim[x][y],
    with the max over an empty selection defined as 0.
    """
    m = relevance.shape[0]
    k = min(int(top_n), m)
    selected = np.empty(k, dtype=np.int64)
    scores_out = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected, scores_out
    one_minus = 1.0 - lam
    # zeros realize the empty-max convention for the first step only; the
    # first pick overwrites them so negative similarities are not floored
    max_sim = np.zeros(m, dtype=np.float64)
    active = np.ones(m, dtype=bool)
    for step in range(k):
        scores = lam * relevance - one_minus * max_sim
        pick = _argbest(scores, active, tie_rank)
        selected[step] = pick
        scores_out[step] = scores[pick]
        active[pick] = False
        if step == 0:
            max_sim[:] = sim[pick]
        else:
            np.maximum(max_sim, sim[pick], out=max_sim)
    return selected, scores_out
