"""Pure numpy CART kernels.

Same algorithm, node order, random stream and floating-point operation order
as the compiled ``_cart`` extension, so either backend yields identical trees.
Used when the extension is not built or ``SABEAM_PURE_PYTHON`` is set.
"""
import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


class _SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def _best_regression_split(xs, ys, total, min_leaf):
    n = len(ys)
    s_l = np.cumsum(ys)[:-1]
    n_l = np.arange(1, n, dtype=np.float64)
    n_r = n - n_l
    valid = (n_l >= min_leaf) & (n_r >= min_leaf) & (xs[:-1] != xs[1:])
    if not valid.any():
        return -1, 0.0
    s_r = total - s_l
    proxy = s_l * s_l / n_l + s_r * s_r / n_r
    proxy = np.where(valid, proxy, -np.inf)
    k = int(np.argmax(proxy))
    return k, float(proxy[k])


def _best_gini_split(xs, ys, n_classes, min_leaf):
    n = len(ys)
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), ys.astype(np.int64)] = 1
    cnt_l = np.cumsum(onehot, axis=0)[:-1]
    cnt_r = onehot.sum(axis=0) - cnt_l
    sq_l = (cnt_l * cnt_l).sum(axis=1)
    sq_r = (cnt_r * cnt_r).sum(axis=1)
    n_l = np.arange(1, n, dtype=np.int64)
    n_r = n - n_l
    valid = (n_l >= min_leaf) & (n_r >= min_leaf) & (xs[:-1] != xs[1:])
    if not valid.any():
        return -1, 0.0
    proxy = sq_l.astype(np.float64) / n_l + sq_r.astype(np.float64) / n_r
    proxy = np.where(valid, proxy, -np.inf)
    k = int(np.argmax(proxy))
    return k, float(proxy[k])


def build_tree(X, y, max_depth, min_leaf, mtry, seed, n_classes=0):
    """Grow one CART tree; returns ``(feature, threshold, left, right, value)``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, d = X.shape
    if n < 1 or y.shape[0] != n:
        raise ValueError("X and y must have the same non-zero number of rows")
    rng = _SplitMix64(seed)
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    new_node()
    # stack entries: (node id, sample positions in ascending order, depth)
    stack = [(0, np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ys = y[idx]
        n_node = len(idx)
        if n_classes > 0:
            counts = np.bincount(ys.astype(np.int64), minlength=n_classes)
            value[node] = float(np.argmax(counts))
            is_leaf = counts.max() == n_node
            total = 0.0
        else:
            total = float(np.cumsum(ys)[-1])
            value[node] = total / n_node
            is_leaf = ys.min() == ys.max()
        if is_leaf or (max_depth >= 0 and depth >= max_depth) or n_node < 2 * min_leaf:
            continue

        best = None
        visited = 0
        feat = list(range(d))
        for i in range(d):
            j = i + rng.next() % (d - i)
            feat[i], feat[j] = feat[j], feat[i]
            f = feat[i]
            col = X[idx, f]
            srt = np.argsort(col, kind="stable")
            xs = col[srt]
            if xs[0] == xs[-1]:
                continue
            visited += 1
            if n_classes > 0:
                k, proxy = _best_gini_split(xs, ys[srt], n_classes, min_leaf)
            else:
                k, proxy = _best_regression_split(xs, ys[srt], total, min_leaf)
            if k >= 0 and (best is None or proxy > best[0]):
                best = (proxy, f, k, xs[k], xs[k + 1], srt)
            if visited >= mtry:
                break

        if best is None:
            continue
        _, f, k, a, b, srt = best
        thr = 0.5 * (a + b)
        if thr >= b:
            thr = a
        mask = np.zeros(n_node, dtype=bool)
        mask[srt[: k + 1]] = True
        feature[node] = f
        threshold[node] = float(thr)
        left_id = new_node()
        right_id = new_node()
        left[node] = left_id
        right[node] = right_id
        stack.append((right_id, idx[~mask], depth + 1))
        stack.append((left_id, idx[mask], depth + 1))

    return (
        np.asarray(feature, dtype=np.int64),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(value, dtype=np.float64),
    )


def predict_tree(X, feature, threshold, left, right, value):
    """Route each row of ``X`` to its leaf and return the leaf values."""
    X = np.asarray(X, dtype=np.float64)
    node = np.zeros(X.shape[0], dtype=np.int64)
    rows = np.arange(X.shape[0])
    active = feature[node] >= 0
    while active.any():
        r = rows[active]
        nd = node[active]
        go_left = X[r, feature[nd]] <= threshold[nd]
        node[active] = np.where(go_left, left[nd], right[nd])
        active = feature[node] >= 0
    return value[node].astype(np.float64)
