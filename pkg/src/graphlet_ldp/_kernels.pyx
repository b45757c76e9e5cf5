# cython: language_level=3
"""Compiled counting kernels.

Same contracts as ``_pykernels``. The subset sum runs one OpenMP task per
leading node; each task accumulates sequentially into its own slot, so the
per-node partial sums do not depend on the thread count.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.stdint cimport uint64_t, int64_t, int32_t
from libc.stdlib cimport malloc, free

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    """
    static inline int ldp_popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int ldp_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int ldp_popcount64(unsigned long long x) nogil
    int ldp_ctz64(unsigned long long x) nogil


cdef double _descend(int d, int start, int n, int k, int m, int e_per,
                     const double* vals, const int32_t* lo, const int32_t* off,
                     int* idx, double* partial) noexcept nogil:
    cdef double total = 0.0
    cdef double p, s
    cdef int v, c, e, nonzero
    cdef int last = n - (k - d)
    for v in range(start, last + 1):
        idx[d] = v
        nonzero = 0
        for c in range(m):
            p = partial[(d - 1) * m + c]
            for e in range(off[c * (k + 1) + d], off[c * (k + 1) + d + 1]):
                p = p * vals[idx[lo[c * e_per + e]] * n + v]
            partial[d * m + c] = p
            if p != 0.0:
                nonzero = 1
        if not nonzero:
            continue
        if d == k - 1:
            s = 0.0
            for c in range(m):
                s = s + partial[d * m + c]
            total = total + s
        else:
            total = total + _descend(d + 1, v + 1, n, k, m, e_per, vals, lo, off, idx, partial)
    return total


cdef double _led_by(int i, int n, int k, int m, int e_per,
                    const double* vals, const int32_t* lo, const int32_t* off) noexcept nogil:
    cdef int* idx = <int*> malloc(k * sizeof(int))
    cdef double* partial = <double*> malloc(k * m * sizeof(double))
    cdef double result
    cdef int c
    idx[0] = i
    for c in range(m):
        partial[c] = 1.0
    result = _descend(1, i + 1, n, k, m, e_per, vals, lo, off, idx, partial)
    free(idx)
    free(partial)
    return result


def subset_partial_sums(values, placements, int k, int num_threads=0):
    """Per-leading-node sums of placement products over all ``k``-subsets."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef int n = vals.shape[0]
    pl = np.ascontiguousarray(placements, dtype=np.int32)
    cdef int m = pl.shape[0]
    cdef int e_per = pl.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] lo = np.ascontiguousarray(pl[:, :, 0])
    hi = pl[:, :, 1]
    # off[c, d]: first edge of placement c whose larger endpoint is >= d
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] off = np.ascontiguousarray(
        np.stack([np.searchsorted(hi[c], np.arange(k + 1), side="left") for c in range(m)]),
        dtype=np.int32,
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n, dtype=np.float64)
    if k > n or k < 2:
        return out
    cdef const double* vp = &vals[0, 0]
    cdef const int32_t* lp = &lo[0, 0]
    cdef const int32_t* op = &off[0, 0]
    cdef double* outp = &out[0]
    cdef int i
    cdef int top = n - k + 1
    if num_threads <= 0:
        for i in prange(top, nogil=True, schedule="dynamic"):
            outp[i] = _led_by(i, n, k, m, e_per, vp, lp, op)
    else:
        for i in prange(top, nogil=True, schedule="dynamic", num_threads=num_threads):
            outp[i] = _led_by(i, n, k, m, e_per, vp, lp, op)
    return out


cdef int64_t _inject(int t, int k, int words, const uint64_t* rows, const signed char* back,
                     int* mapped, uint64_t* used, uint64_t* cand, const uint64_t* full) noexcept nogil:
    cdef uint64_t* c = cand + t * words
    cdef int w, s
    cdef int64_t total = 0
    cdef uint64_t bits, low
    for w in range(words):
        c[w] = full[w] & ~used[w]
    for s in range(t):
        if back[t * k + s]:
            for w in range(words):
                c[w] &= rows[mapped[s] * words + w]
    if t == k - 1:
        for w in range(words):
            total += ldp_popcount64(c[w])
        return total
    for w in range(words):
        bits = c[w]
        while bits:
            low = bits & (~bits + 1)
            mapped[t] = w * 64 + ldp_ctz64(bits)
            used[w] |= low
            total += _inject(t + 1, k, words, rows, back, mapped, used, cand, full)
            used[w] &= ~low
            bits ^= low
    return total


def count_injective(graph, order, back):
    """Injective maps of the pattern into ``graph`` with every pattern edge present."""
    cdef int k = len(order)
    cdef int n = graph.n
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] rows = np.array(graph.bitset_rows, dtype=np.uint64, order="C")
    cdef int words = rows.shape[1]
    cdef cnp.ndarray[cnp.int8_t, ndim=2, mode="c"] bk = np.ascontiguousarray(back, dtype=np.int8)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] full = np.zeros(words, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] used = np.zeros(words, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] cand = np.zeros(words * k, dtype=np.uint64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] mapped = np.zeros(k, dtype=np.int32)
    cdef int v
    if n == 0 or k > n:
        return 0
    for v in range(n):
        full[v // 64] |= (<uint64_t> 1) << (v % 64)
    cdef int64_t total
    with nogil:
        total = _inject(0, k, words, &rows[0, 0], <const signed char*> &bk[0, 0],
                        <int*> &mapped[0], &used[0], &cand[0], &full[0])
    return int(total)
