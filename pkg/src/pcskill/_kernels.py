"""Hot-loop kernels shared by the scoring and grid modules.

Each kernel is written once in a numba-compatible subset of Python. When
numba is importable the functions are JIT-compiled (nogil, so grid sweeps
parallelize across threads); otherwise the same source runs under plain
CPython, producing bit-identical results, only slower.

The pool-adjacent-violators arithmetic here mirrors pav.pav_isotonic
exactly: a fresh block's mean is the raw value itself (not (v*w)/w, which
can round differently), merges accumulate (value*weight, weight) sums, and
a pooled mean is their quotient. Tests assert bitwise agreement between
these kernels and the public per-column route.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


@njit(cache=True, nogil=True)
def _fit_cdf_matrix(cum_counts, sizes):
    """Per-threshold antitonic PAV over cumulative outcome counts.

    cum_counts: (g, m) float64, entry (j, k) = number of outcomes in group
    j that are <= threshold k. sizes: (g,) float64 group sizes. Returns the
    (g, m) fitted CDF matrix: column k is the antitonic weighted-mean fit
    of cum_counts[:, k] / sizes with weights sizes, computed by reversing,
    running the isotonic stack scan, and reversing back.
    """
    g, m = cum_counts.shape
    out = np.empty((g, m), dtype=np.float64)
    start = np.empty(g, dtype=np.int64)
    vsum = np.empty(g, dtype=np.float64)
    wsum = np.empty(g, dtype=np.float64)
    mean = np.empty(g, dtype=np.float64)
    for k in range(m):
        top = 0
        for i in range(g):
            j = g - 1 - i
            v = cum_counts[j, k] / sizes[j]
            w = sizes[j]
            start[top] = i
            vsum[top] = v * w
            wsum[top] = w
            mean[top] = v
            top += 1
            while top >= 2 and mean[top - 2] > mean[top - 1]:
                vsum[top - 2] += vsum[top - 1]
                wsum[top - 2] += wsum[top - 1]
                mean[top - 2] = vsum[top - 2] / wsum[top - 2]
                top -= 1
        for b in range(top):
            lo = start[b]
            hi = start[b + 1] if b + 1 < top else g
            for i in range(lo, hi):
                out[g - 1 - i, k] = mean[b]
    return out


@njit(cache=True, nogil=True)
def _pc_total(thresholds, sizes, group_by_y, thr_ptr):
    """Sum of in-sample CRPS over all instances (n times the PC value).

    thresholds: (m,) sorted unique outcomes. sizes: (g,) group sizes.
    group_by_y: (n,) group index of each instance, instances ordered by
    outcome. thr_ptr: (m+1,) offsets so instances with outcome equal to
    thresholds[k] occupy group_by_y[thr_ptr[k]:thr_ptr[k+1]].

    Streams over thresholds keeping only O(g) state: per-group counts of
    outcomes seen so far, the antitonic fit of their means, and the
    accumulated squared-integrand sum, so no g x m matrix is formed.
    """
    g = sizes.shape[0]
    m = thresholds.shape[0]
    below = np.zeros(g, dtype=np.float64)
    start = np.empty(g, dtype=np.int64)
    vsum = np.empty(g, dtype=np.float64)
    wsum = np.empty(g, dtype=np.float64)
    mean = np.empty(g, dtype=np.float64)
    total = 0.0
    for k in range(m):
        for p in range(thr_ptr[k], thr_ptr[k + 1]):
            below[group_by_y[p]] += 1.0
        if k == m - 1:
            break
        top = 0
        for i in range(g):
            j = g - 1 - i
            v = below[j] / sizes[j]
            w = sizes[j]
            start[top] = i
            vsum[top] = v * w
            wsum[top] = w
            mean[top] = v
            top += 1
            while top >= 2 and mean[top - 2] > mean[top - 1]:
                vsum[top - 2] += vsum[top - 1]
                wsum[top - 2] += wsum[top - 1]
                mean[top - 2] = vsum[top - 2] / wsum[top - 2]
                top -= 1
        acc = 0.0
        for b in range(top):
            lo = start[b]
            hi = start[b + 1] if b + 1 < top else g
            f = mean[b]
            for i in range(lo, hi):
                j = g - 1 - i
                acc += sizes[j] * f * f - 2.0 * f * below[j] + below[j]
        total += (thresholds[k + 1] - thresholds[k]) * acc
    return total


@njit(cache=True, nogil=True)
def _cpa_sums(x_rank, y_rank):
    """Numerator and denominator of the threshold-averaged concordance.

    Instances must arrive sorted by outcome; x_rank holds dense ranks of
    the model output (0..g-1) and y_rank the dense unique-outcome index of
    each instance as float64. For every pair the weight is the outcome-rank
    gap (the number of binarization thresholds the pair straddles), and
    credit is 1 if the model output is concordant, 1/2 if tied. Pairs with
    equal outcomes carry zero weight, so they drop out automatically.

    Uses two Fenwick trees over x-ranks (pair counts and y-rank sums) plus
    plain per-rank totals for the tie bucket; O(n log n).
    """
    n = x_rank.shape[0]
    g = 0
    for i in range(n):
        if x_rank[i] + 1 > g:
            g = x_rank[i] + 1
    tree_cnt = np.zeros(g + 1, dtype=np.float64)
    tree_sum = np.zeros(g + 1, dtype=np.float64)
    eq_cnt = np.zeros(g, dtype=np.float64)
    eq_sum = np.zeros(g, dtype=np.float64)
    num = 0.0
    seen = 0.0
    seen_rank = 0.0
    den = 0.0
    for j in range(n):
        r = x_rank[j]
        v = y_rank[j]
        below_cnt = 0.0
        below_sum = 0.0
        k = r  # prefix over ranks 0..r-1 in 1-based tree coordinates
        while k > 0:
            below_cnt += tree_cnt[k]
            below_sum += tree_sum[k]
            k -= k & (-k)
        num += v * below_cnt - below_sum
        num += 0.5 * (v * eq_cnt[r] - eq_sum[r])
        den += v * seen - seen_rank
        k = r + 1
        while k <= g:
            tree_cnt[k] += 1.0
            tree_sum[k] += v
            k += k & (-k)
        eq_cnt[r] += 1.0
        eq_sum[r] += v
        seen += 1.0
        seen_rank += v
    return num, den


def warm_up() -> None:
    """Trigger JIT compilation of all kernels on tiny inputs."""
    cum = np.array([[1.0, 2.0], [0.0, 1.0]])
    sizes = np.array([2.0, 1.0])
    _fit_cdf_matrix(cum, sizes)
    thr = np.array([1.0, 2.0])
    gby = np.array([0, 1], dtype=np.int64)
    ptr = np.array([0, 1, 2], dtype=np.int64)
    _pc_total(thr, sizes, gby, ptr)
    _cpa_sums(np.array([1, 0], dtype=np.int64), np.array([0.0, 1.0]))
