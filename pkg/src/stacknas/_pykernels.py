"""Pure numpy fallbacks for the compiled kernels in ``_ckernels``.

Summation order mirrors the compiled loops (sequential, row order within a
node) so both backends grow identical trees.
"""
import numpy as np


def _seqsum(x):
    # add.accumulate is strictly left-to-right, unlike the pairwise np.sum
    return float(np.add.accumulate(x)[-1]) if len(x) else 0.0


def build_tree(codes, n_bins, targets, rows, max_depth, min_samples_leaf):
    codes = np.asarray(codes, dtype=np.int32)
    n_bins = np.asarray(n_bins, dtype=np.int32)
    targets = np.asarray(targets, dtype=np.float64)
    work = np.array(rows, dtype=np.int64)
    m = work.shape[0]
    if m == 0:
        raise ValueError("cannot grow a tree on an empty row set")
    d = codes.shape[0]
    max_bins = max(1, int(n_bins.max())) if d else 1
    offsets = (np.arange(d, dtype=np.int64) * max_bins)[:, None]
    bin_index = np.arange(max_bins)
    in_range = bin_index[None, :] < n_bins[:, None]

    feature, lo_bin, hi_bin, left, right = [], [], [], [], []
    value, count, gain = [], [], []

    def new_node():
        feature.append(-1)
        lo_bin.append(-1)
        hi_bin.append(-1)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        count.append(0)
        gain.append(0.0)
        return len(feature) - 1

    stack = [(new_node(), 0, m, 0)]
    while stack:
        node, start, end, depth = stack.pop()
        cnt = end - start
        seg = work[start:end]
        t = targets[seg]
        count[node] = cnt
        tmin = t.min()
        if tmin == t.max():
            value[node] = float(tmin)
            continue
        mean = _seqsum(t) / cnt
        value[node] = mean
        if depth >= max_depth or cnt < 2 * min_samples_leaf:
            continue

        cent = t - mean
        tot = _seqsum(cent)
        sse = _seqsum(cent * cent)

        flat = (codes[:, seg] + offsets).ravel()
        hsum = np.bincount(flat, weights=np.tile(cent, d), minlength=d * max_bins)
        hcnt = np.bincount(flat, minlength=d * max_bins)
        hsum = hsum.reshape(d, max_bins)
        hcnt = hcnt.reshape(d, max_bins)
        occupied = (hcnt > 0) & in_range
        sl = np.cumsum(hsum, axis=1)
        nl = np.cumsum(hcnt, axis=1)

        best = None
        best_gain = 0.0
        for f in range(d):
            occ = np.flatnonzero(occupied[f])
            if occ.size < 2:
                continue
            lo = occ[:-1]
            hi = occ[1:]
            nl_f = nl[f, lo]
            nr_f = cnt - nl_f
            ok = (nl_f >= min_samples_leaf) & (nr_f >= min_samples_leaf)
            if not ok.any():
                continue
            sl_f = sl[f, lo][ok]
            sr_f = tot - sl_f
            nl_ok = nl_f[ok]
            nr_ok = nr_f[ok]
            g = sl_f * sl_f / nl_ok + sr_f * sr_f / nr_ok - tot * tot / cnt
            for k, gk in zip(np.flatnonzero(ok), g):
                if best is None or gk > best_gain + 1e-12 * abs(best_gain):
                    best = (f, int(lo[k]), int(hi[k]))
                    best_gain = float(gk)

        if best is None or not (best_gain > 1e-12 * sse):
            continue

        f, lo, hi = best
        goes_left = codes[f, seg] <= lo
        n_left = int(goes_left.sum())
        work[start:end] = np.concatenate([seg[goes_left], seg[~goes_left]])
        feature[node], lo_bin[node], hi_bin[node] = f, lo, hi
        gain[node] = best_gain
        li = new_node()
        ri = new_node()
        left[node], right[node] = li, ri
        stack.append((ri, start + n_left, end, depth + 1))
        stack.append((li, start, start + n_left, depth + 1))

    return (
        np.asarray(feature, dtype=np.int32),
        np.asarray(lo_bin, dtype=np.int32),
        np.asarray(hi_bin, dtype=np.int32),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.asarray(value, dtype=np.float64),
        np.asarray(count, dtype=np.int64),
        np.asarray(gain, dtype=np.float64),
    )


def predict_tree(X, feature, threshold, left, right, value, scale, out):
    n = X.shape[0]
    node = np.zeros(n, dtype=np.int64)
    active = np.flatnonzero(feature[node] >= 0)
    while active.size:
        cur = node[active]
        f = feature[cur]
        go_left = X[active, f] <= threshold[cur]
        node[active] = np.where(go_left, left[cur], right[cur])
        active = active[feature[node[active]] >= 0]
    out += scale * value[node]


def count_inversions(values):
    a = np.asarray(values, dtype=np.int64)
    n = a.shape[0]
    if n < 2:
        return 0
    # bottom-up merge sort; each pass merges runs of width w with searchsorted
    inv = 0
    width = 1
    a = a.copy()
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            left_run = a[lo:mid]
            right_run = a[mid:hi]
            # elements of left strictly greater than each right element
            inv += int((left_run.size - np.searchsorted(left_run, right_run, side="right")).sum())
            a[lo:hi] = np.sort(np.concatenate([left_run, right_run]), kind="stable")
        width *= 2
    return inv
