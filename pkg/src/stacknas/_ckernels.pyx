# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: binned tree growth, tree application, inversion counting.

Every routine here has a numpy twin in ``_pykernels`` with the same
signature and the same floating-point operation order.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64


def build_tree(const i32[:, ::1] codes, const i32[::1] n_bins,
               const double[::1] targets, const i64[::1] rows,
               int max_depth, int min_samples_leaf):
    """Grow one least-squares tree on pre-binned features.

    ``codes`` is feature-major (d, n). Returns node arrays
    ``(feature, lo_bin, hi_bin, left, right, value, n_samples, gain)``;
    leaves carry ``feature == -1``.
    """
    cdef Py_ssize_t d = codes.shape[0]
    cdef Py_ssize_t m = rows.shape[0]
    if m == 0:
        raise ValueError("cannot grow a tree on an empty row set")

    cdef Py_ssize_t cap = 2 * m - 1
    if max_depth < 62 and (2 << max_depth) - 1 < cap:
        cap = (2 << max_depth) - 1

    feature_a = np.full(cap, -1, dtype=np.int32)
    lo_a = np.full(cap, -1, dtype=np.int32)
    hi_a = np.full(cap, -1, dtype=np.int32)
    left_a = np.full(cap, -1, dtype=np.int32)
    right_a = np.full(cap, -1, dtype=np.int32)
    value_a = np.zeros(cap, dtype=np.float64)
    count_a = np.zeros(cap, dtype=np.int64)
    gain_a = np.zeros(cap, dtype=np.float64)
    cdef i32[::1] feature = feature_a
    cdef i32[::1] lo_bin = lo_a
    cdef i32[::1] hi_bin = hi_a
    cdef i32[::1] left = left_a
    cdef i32[::1] right = right_a
    cdef double[::1] value = value_a
    cdef i64[::1] count = count_a
    cdef double[::1] gain_out = gain_a

    cdef i64[::1] work = np.array(rows, dtype=np.int64)
    cdef i64[::1] spill = np.empty(m, dtype=np.int64)
    cdef double[::1] cent = np.empty(m, dtype=np.float64)

    cdef i32 max_bins = 1
    cdef Py_ssize_t f, i, b
    for f in range(d):
        if n_bins[f] > max_bins:
            max_bins = n_bins[f]
    cdef double[::1] hsum = np.zeros(max_bins, dtype=np.float64)
    cdef i64[::1] hcnt = np.zeros(max_bins, dtype=np.int64)

    cdef i64[::1] st_node = np.empty(cap, dtype=np.int64)
    cdef i64[::1] st_start = np.empty(cap, dtype=np.int64)
    cdef i64[::1] st_end = np.empty(cap, dtype=np.int64)
    cdef i64[::1] st_depth = np.empty(cap, dtype=np.int64)
    cdef Py_ssize_t top = 1
    cdef Py_ssize_t n_nodes = 1
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = m
    st_depth[0] = 0

    cdef Py_ssize_t node, start, end, depth, cnt, p, q, nb, prev
    cdef double s, mean, tmin, tmax, t, c, tot, sse, sl, sr, g, best_gain
    cdef i64 nl, nr, r
    cdef i32 best_f, best_lo, best_hi

    with nogil:
        while top > 0:
            top -= 1
            node = st_node[top]
            start = st_start[top]
            end = st_end[top]
            depth = st_depth[top]
            cnt = end - start

            s = 0.0
            tmin = targets[work[start]]
            tmax = tmin
            for i in range(start, end):
                t = targets[work[i]]
                s += t
                if t < tmin:
                    tmin = t
                if t > tmax:
                    tmax = t
            mean = s / cnt
            count[node] = cnt
            if tmin == tmax:
                value[node] = tmin
                continue
            value[node] = mean
            if depth >= max_depth or cnt < 2 * min_samples_leaf:
                continue

            tot = 0.0
            sse = 0.0
            for i in range(start, end):
                c = targets[work[i]] - mean
                cent[i - start] = c
                tot += c
                sse += c * c

            best_f = -1
            best_lo = -1
            best_hi = -1
            best_gain = 0.0
            for f in range(d):
                nb = n_bins[f]
                for b in range(nb):
                    hsum[b] = 0.0
                    hcnt[b] = 0
                for i in range(start, end):
                    b = codes[f, work[i]]
                    hsum[b] += cent[i - start]
                    hcnt[b] += 1
                sl = 0.0
                nl = 0
                prev = -1
                for b in range(nb):
                    if hcnt[b] == 0:
                        continue
                    if prev >= 0:
                        nr = cnt - nl
                        if nl >= min_samples_leaf and nr >= min_samples_leaf:
                            sr = tot - sl
                            g = sl * sl / nl + sr * sr / nr - tot * tot / cnt
                            if best_f < 0 or g > best_gain + 1e-12 * fabs(best_gain):
                                best_f = <i32>f
                                best_lo = <i32>prev
                                best_hi = <i32>b
                                best_gain = g
                    sl += hsum[b]
                    nl += hcnt[b]
                    prev = b

            if best_f < 0 or not (best_gain > 1e-12 * sse):
                continue

            p = start
            q = 0
            for i in range(start, end):
                r = work[i]
                if codes[best_f, r] <= best_lo:
                    work[p] = r
                    p += 1
                else:
                    spill[q] = r
                    q += 1
            for i in range(q):
                work[p + i] = spill[i]

            feature[node] = best_f
            lo_bin[node] = best_lo
            hi_bin[node] = best_hi
            gain_out[node] = best_gain
            left[node] = <i32>n_nodes
            right[node] = <i32>(n_nodes + 1)

            st_node[top] = n_nodes + 1
            st_start[top] = p
            st_end[top] = end
            st_depth[top] = depth + 1
            top += 1
            st_node[top] = n_nodes
            st_start[top] = start
            st_end[top] = p
            st_depth[top] = depth + 1
            top += 1
            n_nodes += 2

    return (feature_a[:n_nodes].copy(), lo_a[:n_nodes].copy(), hi_a[:n_nodes].copy(),
            left_a[:n_nodes].copy(), right_a[:n_nodes].copy(), value_a[:n_nodes].copy(),
            count_a[:n_nodes].copy(), gain_a[:n_nodes].copy())


def predict_tree(const double[:, ::1] X, const i32[::1] feature,
                 const double[::1] threshold, const i32[::1] left,
                 const i32[::1] right, const double[::1] value,
                 double scale, double[::1] out):
    """Accumulate ``scale * leaf value`` for every row of ``X`` into ``out``."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i
    cdef i32 node, f
    for i in range(n):
        node = 0
        f = feature[0]
        while f >= 0:
            if X[i, f] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
            f = feature[node]
        out[i] += scale * value[node]


cdef i64 _merge_count(i64[::1] a, i64[::1] buf, Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef Py_ssize_t mid, i, j, k
    cdef i64 inv
    if hi - lo < 2:
        return 0
    mid = (lo + hi) // 2
    inv = _merge_count(a, buf, lo, mid) + _merge_count(a, buf, mid, hi)
    i = lo
    j = mid
    k = lo
    while i < mid and j < hi:
        if a[j] < a[i]:
            buf[k] = a[j]
            inv += mid - i
            j += 1
        else:
            buf[k] = a[i]
            i += 1
        k += 1
    while i < mid:
        buf[k] = a[i]
        i += 1
        k += 1
    while j < hi:
        buf[k] = a[j]
        j += 1
        k += 1
    for k in range(lo, hi):
        a[k] = buf[k]
    return inv


def count_inversions(const i64[::1] values):
    """Number of pairs i < j with values[i] > values[j] (strict)."""
    cdef Py_ssize_t n = values.shape[0]
    cdef i64[::1] a = np.array(values, dtype=np.int64)
    cdef i64[::1] buf = np.empty(n, dtype=np.int64)
    cdef i64 inv
    with nogil:
        inv = _merge_count(a, buf, 0, n)
    return int(inv)
