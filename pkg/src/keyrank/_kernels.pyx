# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled selection kernels.

Arithmetic-identical to keyrank._kernels_py: same expressions and the
same accumulation order, so gains are bit-equal across backends (the
extension is compiled with -ffp-contract=off to keep it that way).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


cdef inline bint _before(double g1, cnp.int64_t t1, double g2, cnp.int64_t t2) nogil:
    # max-heap order: higher gain first, then smaller tie rank
    return g1 > g2 or (g1 == g2 and t1 < t2)


def greedy_select(const double[::1] relevance, const double[:, ::1] sim,
                  double alpha, Py_ssize_t top_n,
                  const cnp.int64_t[::1] tie_rank):
    cdef Py_ssize_t m = relevance.shape[0]
    cdef Py_ssize_t k = top_n if top_n < m else m
    selected_arr = np.empty(k, dtype=np.int64)
    gains_arr = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected_arr, gains_arr
    cdef cnp.int64_t[::1] selected = selected_arr
    cdef double[::1] gains = gains_arr
    penalty_arr = np.zeros(m, dtype=np.float64)
    active_arr = np.ones(m, dtype=np.uint8)
    cdef double[::1] penalty = penalty_arr
    cdef unsigned char[::1] active = active_arr
    cdef Py_ssize_t step, x, pick
    cdef double g, best
    cdef cnp.int64_t best_tie
    for step in range(k):
        pick = -1
        best = 0.0
        best_tie = 0
        for x in range(m):
            if not active[x]:
                continue
            g = relevance[x] - alpha * penalty[x]
            if pick < 0 or _before(g, tie_rank[x], best, best_tie):
                pick = x
                best = g
                best_tie = tie_rank[x]
        selected[step] = pick
        gains[step] = best
        active[pick] = 0
        for x in range(m):
            penalty[x] += sim[pick, x]
    return selected_arr, gains_arr


# ---------------------------------------------------------------------------
# binary max-heap over parallel arrays, ordered by (gain desc, tie asc);
# entries carry the candidate index and the stamp (selection count at
# which the cached gain was computed)

cdef inline void _sift_up(double[::1] hg, cnp.int64_t[::1] ht,
                          cnp.int64_t[::1] hi, cnp.int64_t[::1] hs,
                          Py_ssize_t pos) nogil:
    cdef double g = hg[pos]
    cdef cnp.int64_t t = ht[pos], i = hi[pos], s = hs[pos]
    cdef Py_ssize_t parent
    while pos > 0:
        parent = (pos - 1) >> 1
        if _before(g, t, hg[parent], ht[parent]):
            hg[pos] = hg[parent]; ht[pos] = ht[parent]
            hi[pos] = hi[parent]; hs[pos] = hs[parent]
            pos = parent
        else:
            break
    hg[pos] = g; ht[pos] = t; hi[pos] = i; hs[pos] = s


cdef inline void _sift_down(double[::1] hg, cnp.int64_t[::1] ht,
                            cnp.int64_t[::1] hi, cnp.int64_t[::1] hs,
                            Py_ssize_t pos, Py_ssize_t n) nogil:
    cdef double g = hg[pos]
    cdef cnp.int64_t t = ht[pos], i = hi[pos], s = hs[pos]
    cdef Py_ssize_t child
    while True:
        child = 2 * pos + 1
        if child >= n:
            break
        if child + 1 < n and _before(hg[child + 1], ht[child + 1],
                                     hg[child], ht[child]):
            child += 1
        if _before(hg[child], ht[child], g, t):
            hg[pos] = hg[child]; ht[pos] = ht[child]
            hi[pos] = hi[child]; hs[pos] = hs[child]
            pos = child
        else:
            break
    hg[pos] = g; ht[pos] = t; hi[pos] = i; hs[pos] = s


def lazy_greedy_select(const double[::1] relevance, const double[:, ::1] sim,
                       double alpha, Py_ssize_t top_n,
                       const cnp.int64_t[::1] tie_rank):
    cdef Py_ssize_t m = relevance.shape[0]
    cdef Py_ssize_t k = top_n if top_n < m else m
    selected_arr = np.empty(k, dtype=np.int64)
    gains_arr = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected_arr, gains_arr
    cdef cnp.int64_t[::1] selected = selected_arr
    cdef double[::1] gains = gains_arr

    hg_arr = np.empty(m, dtype=np.float64)
    ht_arr = np.empty(m, dtype=np.int64)
    hi_arr = np.empty(m, dtype=np.int64)
    hs_arr = np.empty(m, dtype=np.int64)
    cdef double[::1] hg = hg_arr
    cdef cnp.int64_t[::1] ht = ht_arr
    cdef cnp.int64_t[::1] hi = hi_arr
    cdef cnp.int64_t[::1] hs = hs_arr
    cdef Py_ssize_t n = m, x, pos, count = 0, t
    for x in range(m):
        hg[x] = relevance[x]
        ht[x] = tie_rank[x]
        hi[x] = x
        hs[x] = 0
    # heapify
    for pos in range((n >> 1) - 1, -1, -1):
        _sift_down(hg, ht, hi, hs, pos, n)

    cdef double g, p
    cdef cnp.int64_t tie, idx, stamp
    while count < k:
        # pop the root
        g = hg[0]; tie = ht[0]; idx = hi[0]; stamp = hs[0]
        n -= 1
        if n > 0:
            hg[0] = hg[n]; ht[0] = ht[n]; hi[0] = hi[n]; hs[0] = hs[n]
            _sift_down(hg, ht, hi, hs, 0, n)
        if stamp == count:
            selected[count] = idx
            gains[count] = g
            count += 1
            continue
        # stale: recompute in selection order and push back
        p = 0.0
        for t in range(count):
            p += sim[idx, selected[t]]
        g = relevance[idx] - alpha * p
        hg[n] = g; ht[n] = tie; hi[n] = idx; hs[n] = count
        n += 1
        _sift_up(hg, ht, hi, hs, n - 1)
    return selected_arr, gains_arr


def mmr_select(const double[::1] relevance, const double[:, ::1] sim,
               double lam, Py_ssize_t top_n,
               const cnp.int64_t[::1] tie_rank):
    cdef Py_ssize_t m = relevance.shape[0]
    cdef Py_ssize_t k = top_n if top_n < m else m
    selected_arr = np.empty(k, dtype=np.int64)
    scores_arr = np.empty(k, dtype=np.float64)
    if k == 0:
        return selected_arr, scores_arr
    cdef cnp.int64_t[::1] selected = selected_arr
    cdef double[::1] scores_out = scores_arr
    max_sim_arr = np.zeros(m, dtype=np.float64)
    active_arr = np.ones(m, dtype=np.uint8)
    cdef double[::1] max_sim = max_sim_arr
    cdef unsigned char[::1] active = active_arr
    cdef double one_minus = 1.0 - lam
    cdef Py_ssize_t step, x, pick
    cdef double s, best
    cdef cnp.int64_t best_tie
    for step in range(k):
        pick = -1
        best = 0.0
        best_tie = 0
        for x in range(m):
            if not active[x]:
                continue
            s = lam * relevance[x] - one_minus * max_sim[x]
            if pick < 0 or _before(s, tie_rank[x], best, best_tie):
                pick = x
                best = s
                best_tie = tie_rank[x]
        selected[step] = pick
        scores_out[step] = best
        active[pick] = 0
        if step == 0:
            # first pick overwrites the empty-max zeros so negative
            # similarities are not floored on later steps
            for x in range(m):
                max_sim[x] = sim[pick, x]
        else:
            for x in range(m):
                if sim[pick, x] > max_sim[x]:
                    max_sim[x] = sim[pick, x]
    return selected_arr, scores_arr
