# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled CART kernels.

Mirrors ``_cart_py`` decision for decision: same node order, same random
stream, same floating-point operation order. Any change here must be made
there too (``tests/test_backends.py`` compares the two bit for bit).
"""
import numpy as np

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy


cdef inline uint64_t _splitmix64(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef int _grow(
    const double[:, ::1] X,
    const double[::1] y,
    int64_t[:, ::1] order,
    int64_t[::1] pos,
    int max_depth,
    int min_leaf,
    int mtry,
    uint64_t seed,
    int n_classes,
    int64_t[::1] out_feature,
    double[::1] out_threshold,
    int64_t[::1] out_left,
    int64_t[::1] out_right,
    double[::1] out_value,
) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef uint64_t rng = seed
    cdef Py_ssize_t max_nodes = 2 * n
    cdef int64_t* st_node = <int64_t*>malloc(max_nodes * sizeof(int64_t))
    cdef int64_t* st_start = <int64_t*>malloc(max_nodes * sizeof(int64_t))
    cdef int64_t* st_end = <int64_t*>malloc(max_nodes * sizeof(int64_t))
    cdef int64_t* st_depth = <int64_t*>malloc(max_nodes * sizeof(int64_t))
    cdef int64_t* feat = <int64_t*>malloc(d * sizeof(int64_t))
    cdef int64_t* buf = <int64_t*>malloc(n * sizeof(int64_t))
    cdef char* goes_left = <char*>calloc(n, sizeof(char))
    cdef int64_t k_classes = n_classes if n_classes > 0 else 1
    cdef int64_t* cnt = <int64_t*>calloc(k_classes, sizeof(int64_t))
    cdef int64_t* cnt_l = <int64_t*>calloc(k_classes, sizeof(int64_t))
    cdef int64_t* cnt_r = <int64_t*>calloc(k_classes, sizeof(int64_t))

    cdef Py_ssize_t top = 0
    cdef int64_t node_count = 1
    cdef int64_t node, start, end, depth, n_node
    cdef Py_ssize_t i, j, k, f, c, li, ri
    cdef int64_t tmp, p, best_f, best_k, n_l, n_r, visited
    cdef double total, s_l, s_r, proxy, best_proxy, yv, ymin, ymax, thr, a, b
    cdef int64_t sq_tot, sq_l, sq_r, best_c, best_count
    cdef bint is_leaf, found

    if (st_node == NULL or st_start == NULL or st_end == NULL or st_depth == NULL
            or feat == NULL or buf == NULL or goes_left == NULL or cnt == NULL
            or cnt_l == NULL or cnt_r == NULL):
        free(st_node); free(st_start); free(st_end); free(st_depth)
        free(feat); free(buf); free(goes_left); free(cnt); free(cnt_l); free(cnt_r)
        return -1

    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n
    st_depth[0] = 0
    top = 1

    while top > 0:
        top -= 1
        node = st_node[top]
        start = st_start[top]
        end = st_end[top]
        depth = st_depth[top]
        n_node = end - start

        # node statistics, summed in ascending sample position
        is_leaf = False
        if n_classes > 0:
            for c in range(n_classes):
                cnt[c] = 0
            for i in range(start, end):
                cnt[<int64_t>y[pos[i]]] += 1
            best_c = 0
            best_count = cnt[0]
            sq_tot = 0
            for c in range(n_classes):
                sq_tot += cnt[c] * cnt[c]
                if cnt[c] > best_count:
                    best_count = cnt[c]
                    best_c = c
            out_value[node] = <double>best_c
            total = 0.0
            if best_count == n_node:
                is_leaf = True
        else:
            total = 0.0
            ymin = y[pos[start]]
            ymax = ymin
            for i in range(start, end):
                yv = y[pos[i]]
                total = total + yv
                if yv < ymin:
                    ymin = yv
                if yv > ymax:
                    ymax = yv
            out_value[node] = total / n_node
            if ymin == ymax:
                is_leaf = True

        out_feature[node] = -1
        out_threshold[node] = 0.0
        out_left[node] = -1
        out_right[node] = -1

        if is_leaf or (max_depth >= 0 and depth >= max_depth) or n_node < 2 * min_leaf:
            continue

        best_f = -1
        best_k = -1
        best_proxy = 0.0
        visited = 0
        for i in range(d):
            feat[i] = i
        for i in range(d):
            j = i + <Py_ssize_t>(_splitmix64(&rng) % <uint64_t>(d - i))
            tmp = feat[i]
            feat[i] = feat[j]
            feat[j] = tmp
            f = feat[i]
            if X[order[f, start], f] == X[order[f, end - 1], f]:
                continue
            visited += 1
            if n_classes > 0:
                for c in range(n_classes):
                    cnt_l[c] = 0
                    cnt_r[c] = cnt[c]
                sq_l = 0
                sq_r = sq_tot
                for k in range(start, end - 1):
                    c = <Py_ssize_t>y[order[f, k]]
                    sq_l += 2 * cnt_l[c] + 1
                    cnt_l[c] += 1
                    sq_r -= 2 * cnt_r[c] - 1
                    cnt_r[c] -= 1
                    n_l = k - start + 1
                    n_r = n_node - n_l
                    if n_l < min_leaf:
                        continue
                    if n_r < min_leaf:
                        break
                    if X[order[f, k], f] == X[order[f, k + 1], f]:
                        continue
                    proxy = (<double>sq_l) / n_l + (<double>sq_r) / n_r
                    if best_f < 0 or proxy > best_proxy:
                        best_proxy = proxy
                        best_f = f
                        best_k = k
            else:
                s_l = 0.0
                for k in range(start, end - 1):
                    s_l = s_l + y[order[f, k]]
                    n_l = k - start + 1
                    n_r = n_node - n_l
                    if n_l < min_leaf:
                        continue
                    if n_r < min_leaf:
                        break
                    if X[order[f, k], f] == X[order[f, k + 1], f]:
                        continue
                    s_r = total - s_l
                    proxy = s_l * s_l / n_l + s_r * s_r / n_r
                    if best_f < 0 or proxy > best_proxy:
                        best_proxy = proxy
                        best_f = f
                        best_k = k
            if visited >= mtry:
                break

        if best_f < 0:
            continue

        a = X[order[best_f, best_k], best_f]
        b = X[order[best_f, best_k + 1], best_f]
        thr = 0.5 * (a + b)
        if thr >= b:
            thr = a

        for k in range(start, end):
            goes_left[order[best_f, k]] = 1 if k <= best_k else 0

        # stable partition of every per-feature ordering and of pos
        for f in range(d):
            li = start
            ri = 0
            for k in range(start, end):
                p = order[f, k]
                if goes_left[p]:
                    order[f, li] = p
                    li += 1
                else:
                    buf[ri] = p
                    ri += 1
            for k in range(ri):
                order[f, li + k] = buf[k]
        li = start
        ri = 0
        for k in range(start, end):
            p = pos[k]
            if goes_left[p]:
                pos[li] = p
                li += 1
            else:
                buf[ri] = p
                ri += 1
        for k in range(ri):
            pos[li + k] = buf[k]

        out_feature[node] = best_f
        out_threshold[node] = thr
        out_left[node] = node_count
        out_right[node] = node_count + 1

        # right pushed first so the left child is expanded next
        st_node[top] = node_count + 1
        st_start[top] = li
        st_end[top] = end
        st_depth[top] = depth + 1
        top += 1
        st_node[top] = node_count
        st_start[top] = start
        st_end[top] = li
        st_depth[top] = depth + 1
        top += 1
        node_count += 2

    free(st_node); free(st_start); free(st_end); free(st_depth)
    free(feat); free(buf); free(goes_left); free(cnt); free(cnt_l); free(cnt_r)
    return node_count


def build_tree(X, y, int max_depth, int min_leaf, int mtry, seed, int n_classes=0):
    """Grow one CART tree; returns ``(feature, threshold, left, right, value)``.

    ``max_depth < 0`` means unlimited. ``n_classes > 0`` switches to Gini
    classification with ``y`` holding class ids.
    """
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0]
    cdef Py_ssize_t d = Xv.shape[1]
    if n < 1 or yv.shape[0] != n:
        raise ValueError("X and y must have the same non-zero number of rows")
    order_arr = np.ascontiguousarray(np.argsort(np.asarray(Xv), axis=0, kind="stable").T, dtype=np.int64)
    cdef int64_t[:, ::1] order = order_arr
    cdef int64_t[::1] pos = np.arange(n, dtype=np.int64)
    feature = np.empty(2 * n, dtype=np.int64)
    threshold = np.empty(2 * n, dtype=np.float64)
    left = np.empty(2 * n, dtype=np.int64)
    right = np.empty(2 * n, dtype=np.int64)
    value = np.empty(2 * n, dtype=np.float64)
    cdef int64_t[::1] fv = feature
    cdef double[::1] tv = threshold
    cdef int64_t[::1] lv = left
    cdef int64_t[::1] rv = right
    cdef double[::1] vv = value
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int count
    with nogil:
        count = _grow(Xv, yv, order, pos, max_depth, min_leaf, mtry, s, n_classes,
                      fv, tv, lv, rv, vv)
    if count < 0:
        raise MemoryError()
    return (feature[:count].copy(), threshold[:count].copy(), left[:count].copy(),
            right[:count].copy(), value[:count].copy())


def predict_tree(X, feature, threshold, left, right, value):
    """Route each row of ``X`` to its leaf and return the leaf values."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const int64_t[::1] fv = np.ascontiguousarray(feature, dtype=np.int64)
    cdef const double[::1] tv = np.ascontiguousarray(threshold, dtype=np.float64)
    cdef const int64_t[::1] lv = np.ascontiguousarray(left, dtype=np.int64)
    cdef const int64_t[::1] rv = np.ascontiguousarray(right, dtype=np.int64)
    cdef const double[::1] vv = np.ascontiguousarray(value, dtype=np.float64)
    out = np.empty(Xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef int64_t node
    with nogil:
        for i in range(Xv.shape[0]):
            node = 0
            while fv[node] >= 0:
                if Xv[i, fv[node]] <= tv[node]:
                    node = lv[node]
                else:
                    node = rv[node]
            ov[i] = vv[node]
    return out
