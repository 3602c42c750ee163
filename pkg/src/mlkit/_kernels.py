"""Hot numeric inner loops, JIT-compiled with numba when available.

Every kernel is written once as a plain-Python function over numpy arrays
and wrapped with ``numba.njit`` at import time.  Setting ``MLKIT_NUMBA=0``
in the environment (before import) selects the uncompiled fallback; the
two paths execute the same statements in the same order, so results are
bit-identical either way.  ``benchmarks/benchmark_backends.py`` compares
their throughput.

Accumulations are explicit element loops on purpose: the toolkit's
correctness contracts (Lloyd/Hamerly equality, tree-vs-scan equality)
require a fixed floating-point evaluation order, which vectorized
reductions do not guarantee.
"""

import math
import os

import numpy as np


def _numba_enabled():
    flag = os.environ.get("MLKIT_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:
    def _jit(fn):
        return fn


def backend():
    """Name of the active kernel backend: 'numba' or 'numpy'."""
    return "numba" if NUMBA_ENABLED else "numpy"


def _sq_dist_rows(A, i, B, j):
    s = 0.0
    for t in range(A.shape[1]):
        diff = A[i, t] - B[j, t]
        s += diff * diff
    return s


sq_dist_rows = _jit(_sq_dist_rows)


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------

def _assign_full(X, C, assign, d2):
    """Nearest-centroid assignment, ties to the lowest centroid index.

    Fills assign[i] and d2[i] (squared distance to the assigned centroid);
    returns the number of exact distance computations.
    """
    n = X.shape[0]
    k = C.shape[0]
    for i in range(n):
        best = 0
        bd = sq_dist_rows(X, i, C, 0)
        for j in range(1, k):
            dd = sq_dist_rows(X, i, C, j)
            if dd < bd:
                bd = dd
                best = j
        assign[i] = best
        d2[i] = bd
    return n * k


assign_full = _jit(_assign_full)


def _hamerly_init(X, C, assign, upper, lower, d2):
    """Full scan that also records the second-closest distance per point."""
    n = X.shape[0]
    k = C.shape[0]
    for i in range(n):
        best = 0
        bd = sq_dist_rows(X, i, C, 0)
        sd = np.inf
        for j in range(1, k):
            dd = sq_dist_rows(X, i, C, j)
            if dd < bd:
                sd = bd
                bd = dd
                best = j
            elif dd < sd:
                sd = dd
        assign[i] = best
        d2[i] = bd
        upper[i] = math.sqrt(bd)
        lower[i] = math.sqrt(sd)
    return n * k


hamerly_init = _jit(_hamerly_init)


def _half_separation(C, s):
    """s[j] = half the distance from centroid j to its nearest other centroid."""
    k = C.shape[0]
    for j in range(k):
        s[j] = np.inf
    for a in range(k):
        for b in range(a + 1, k):
            dd = sq_dist_rows(C, a, C, b)
            if dd < s[a]:
                s[a] = dd
            if dd < s[b]:
                s[b] = dd
    for j in range(k):
        s[j] = 0.5 * math.sqrt(s[j])
    return k * (k - 1) // 2


half_separation = _jit(_half_separation)


def _hamerly_pass(X, C, assign, upper, lower, d2, s):
    """One bound-pruned assignment pass; returns distance computations used.

    Uses Hamerly's rule: a point is only re-examined when its upper bound
    exceeds max(s[assigned], lower).  Full scans track best and second-best
    with the same strict-< tie rule as ``assign_full``, so assignments are
    identical to an unpruned pass.
    """
    n = X.shape[0]
    k = C.shape[0]
    ndist = 0
    for i in range(n):
        a = assign[i]
        bound = s[a] if s[a] > lower[i] else lower[i]
        if upper[i] <= bound:
            continue
        bd = sq_dist_rows(X, i, C, a)
        ndist += 1
        upper[i] = math.sqrt(bd)
        d2[i] = bd
        if upper[i] <= bound:
            continue
        best = 0
        bd = sq_dist_rows(X, i, C, 0)
        sd = np.inf
        for j in range(1, k):
            dd = sq_dist_rows(X, i, C, j)
            if dd < bd:
                sd = bd
                bd = dd
                best = j
            elif dd < sd:
                sd = dd
        ndist += k
        assign[i] = best
        d2[i] = bd
        upper[i] = math.sqrt(bd)
        lower[i] = math.sqrt(sd)
    return ndist


hamerly_pass = _jit(_hamerly_pass)


def _update_bounds(assign, upper, lower, drifts):
    """Loosen per-point bounds by how far the centroids moved."""
    k = drifts.shape[0]
    longest = 0.0
    second = 0.0
    far = -1
    for j in range(k):
        if drifts[j] > longest:
            second = longest
            longest = drifts[j]
            far = j
        elif drifts[j] > second:
            second = drifts[j]
    for i in range(assign.shape[0]):
        upper[i] += drifts[assign[i]]
        if assign[i] == far:
            lower[i] -= second
        else:
            lower[i] -= longest


update_bounds = _jit(_update_bounds)


def _update_centroids(X, assign, k, out):
    """Mean of each cluster, accumulated in ascending point order."""
    n = X.shape[0]
    d = X.shape[1]
    counts = np.zeros(k, np.int64)
    for j in range(k):
        for t in range(d):
            out[j, t] = 0.0
    for i in range(n):
        c = assign[i]
        counts[c] += 1
        for t in range(d):
            out[c, t] += X[i, t]
    for j in range(k):
        for t in range(d):
            out[j, t] /= counts[j]
    return counts


update_centroids = _jit(_update_centroids)


def _repair_empty(X, C, assign, d2, counts):
    """Give each empty cluster the point farthest from its own centroid.

    Donor clusters must keep at least one member; ties go to the lowest
    point index.  d2 must hold exact squared distances to the assigned
    centroids on entry.  Returns extra distance computations.
    """
    k = counts.shape[0]
    n = X.shape[0]
    extra = 0
    for e in range(k):
        if counts[e] != 0:
            continue
        best = -1
        bd = -1.0
        for i in range(n):
            if counts[assign[i]] > 1 and d2[i] > bd:
                bd = d2[i]
                best = i
        counts[assign[best]] -= 1
        assign[best] = e
        counts[e] = 1
        d2[best] = sq_dist_rows(X, best, C, e)
        extra += 1
    return extra


repair_empty = _jit(_repair_empty)


def _refresh_d2(X, C, assign, d2):
    """Exact squared distance of every point to its assigned centroid."""
    n = X.shape[0]
    for i in range(n):
        d2[i] = sq_dist_rows(X, i, C, assign[i])
    return n


refresh_d2 = _jit(_refresh_d2)


def _centroid_drifts(C_old, C_new, out):
    k = C_old.shape[0]
    for j in range(k):
        out[j] = math.sqrt(sq_dist_rows(C_old, j, C_new, j))
    return k


centroid_drifts = _jit(_centroid_drifts)


def _inertia_from(X, C, assign):
    s = 0.0
    for i in range(X.shape[0]):
        s += sq_dist_rows(X, i, C, assign[i])
    return s


inertia_from = _jit(_inertia_from)


def _nearest_assign_d2_sum(X, C, assign):
    """Assign to nearest centroid and return the summed squared distance."""
    n = X.shape[0]
    k = C.shape[0]
    total = 0.0
    for i in range(n):
        best = 0
        bd = sq_dist_rows(X, i, C, 0)
        for j in range(1, k):
            dd = sq_dist_rows(X, i, C, j)
            if dd < bd:
                bd = dd
                best = j
        assign[i] = best
        total += bd
    return total


nearest_assign_d2_sum = _jit(_nearest_assign_d2_sum)


# ---------------------------------------------------------------------------
# kd-tree queries
# ---------------------------------------------------------------------------

def _box_min_d2(box_min, box_max, node, Q, qi):
    s = 0.0
    for t in range(Q.shape[1]):
        v = Q[qi, t]
        lo = box_min[node, t]
        hi = box_max[node, t]
        if v < lo:
            diff = lo - v
            s += diff * diff
        elif v > hi:
            diff = v - hi
            s += diff * diff
    return s


box_min_d2 = _jit(_box_min_d2)


def _box_max_d2(box_min, box_max, node, Q, qi):
    s = 0.0
    for t in range(Q.shape[1]):
        v = Q[qi, t]
        a = abs(v - box_min[node, t])
        b = abs(box_max[node, t] - v)
        diff = a if a > b else b
        s += diff * diff
    return s


box_max_d2 = _jit(_box_max_d2)


def _knn_kernel(P, perm, split_dim, split_val, left, right, start, end,
                box_min, box_max, Q, k, out_idx, out_d2):
    """Exact k nearest neighbors per query row, branch-and-bound.

    Results ascend by (squared distance, point index); a node is pruned
    only when its box min-distance strictly exceeds the current k-th best,
    so equal-distance candidates with lower indices are never lost.
    """
    m = Q.shape[0]
    stack = np.empty(split_dim.shape[0] + 1, np.int64)
    for qi in range(m):
        row_d2 = out_d2[qi]
        row_idx = out_idx[qi]
        filled = 0
        top = 0
        stack[top] = 0
        top += 1
        while top > 0:
            top -= 1
            node = stack[top]
            if filled == k and box_min_d2(box_min, box_max, node, Q, qi) > row_d2[k - 1]:
                continue
            if left[node] < 0:
                for t in range(start[node], end[node]):
                    p = perm[t]
                    dd = sq_dist_rows(Q, qi, P, p)
                    if filled < k:
                        pos = filled - 1
                        while pos >= 0 and (row_d2[pos] > dd or
                                            (row_d2[pos] == dd and row_idx[pos] > p)):
                            row_d2[pos + 1] = row_d2[pos]
                            row_idx[pos + 1] = row_idx[pos]
                            pos -= 1
                        row_d2[pos + 1] = dd
                        row_idx[pos + 1] = p
                        filled += 1
                    elif dd < row_d2[k - 1] or (dd == row_d2[k - 1] and p < row_idx[k - 1]):
                        pos = k - 2
                        while pos >= 0 and (row_d2[pos] > dd or
                                            (row_d2[pos] == dd and row_idx[pos] > p)):
                            row_d2[pos + 1] = row_d2[pos]
                            row_idx[pos + 1] = row_idx[pos]
                            pos -= 1
                        row_d2[pos + 1] = dd
                        row_idx[pos + 1] = p
            else:
                if Q[qi, split_dim[node]] <= split_val[node]:
                    near = left[node]
                    far = right[node]
                else:
                    near = right[node]
                    far = left[node]
                stack[top] = far
                top += 1
                stack[top] = near
                top += 1


knn_kernel = _jit(_knn_kernel)


def _kfn_kernel(P, perm, split_dim, split_val, left, right, start, end,
                box_min, box_max, Q, k, out_idx, out_d2):
    """Exact k furthest neighbors per query row, branch-and-bound.

    Results descend by squared distance with equal distances ordered by
    ascending point index; pruning uses the box max-distance against the
    current k-th furthest, strictly.
    """
    m = Q.shape[0]
    stack = np.empty(split_dim.shape[0] + 1, np.int64)
    for qi in range(m):
        row_d2 = out_d2[qi]
        row_idx = out_idx[qi]
        filled = 0
        top = 0
        stack[top] = 0
        top += 1
        while top > 0:
            top -= 1
            node = stack[top]
            if filled == k and box_max_d2(box_min, box_max, node, Q, qi) < row_d2[k - 1]:
                continue
            if left[node] < 0:
                for t in range(start[node], end[node]):
                    p = perm[t]
                    dd = sq_dist_rows(Q, qi, P, p)
                    if filled < k:
                        pos = filled - 1
                        while pos >= 0 and (row_d2[pos] < dd or
                                            (row_d2[pos] == dd and row_idx[pos] > p)):
                            row_d2[pos + 1] = row_d2[pos]
                            row_idx[pos + 1] = row_idx[pos]
                            pos -= 1
                        row_d2[pos + 1] = dd
                        row_idx[pos + 1] = p
                        filled += 1
                    elif dd > row_d2[k - 1] or (dd == row_d2[k - 1] and p < row_idx[k - 1]):
                        pos = k - 2
                        while pos >= 0 and (row_d2[pos] < dd or
                                            (row_d2[pos] == dd and row_idx[pos] > p)):
                            row_d2[pos + 1] = row_d2[pos]
                            row_idx[pos + 1] = row_idx[pos]
                            pos -= 1
                        row_d2[pos + 1] = dd
                        row_idx[pos + 1] = p
            else:
                if Q[qi, split_dim[node]] <= split_val[node]:
                    near = left[node]
                    far = right[node]
                else:
                    near = right[node]
                    far = left[node]
                stack[top] = near
                top += 1
                stack[top] = far
                top += 1


kfn_kernel = _jit(_kfn_kernel)


# ---------------------------------------------------------------------------
# kernel density estimation
# ---------------------------------------------------------------------------

def _kernel_from_sq(code, h2, norm, d2):
    """Kernel profile value from a squared distance; code 0=gaussian, 1=epanechnikov."""
    if code == 0:
        return norm * math.exp(-d2 / (2.0 * h2))
    u2 = d2 / h2
    if u2 >= 1.0:
        return 0.0
    return norm * (1.0 - u2)


kernel_from_sq = _jit(_kernel_from_sq)


def _kde_kernel(P, perm, split_dim, split_val, left, right, start, end,
                box_min, box_max, Q, code, h2, norm, rel_tol, out):
    """Tree-approximated kernel density with a per-query relative guarantee.

    A node whose kernel bounds are pinched within the per-point error
    budget contributes count*(K_upper+K_lower)/2; otherwise it is opened.
    The budget rel_tol*K(d_max(root)) spreads rel_tol times a lower bound
    of the exact sum over the n reference points, so the summed midpoint
    error stays within rel_tol times the exact density.  rel_tol = 0 only
    ever approximates nodes with K_upper == K_lower, i.e. exactly.
    """
    m = Q.shape[0]
    n = perm.shape[0]
    stack = np.empty(split_dim.shape[0] + 1, np.int64)
    for qi in range(m):
        budget = rel_tol * kernel_from_sq(code, h2, norm,
                                          box_max_d2(box_min, box_max, 0, Q, qi))
        total = 0.0
        top = 0
        stack[top] = 0
        top += 1
        while top > 0:
            top -= 1
            node = stack[top]
            ku = kernel_from_sq(code, h2, norm,
                                box_min_d2(box_min, box_max, node, Q, qi))
            kl = kernel_from_sq(code, h2, norm,
                                box_max_d2(box_min, box_max, node, Q, qi))
            if 0.5 * (ku - kl) <= budget:
                total += (end[node] - start[node]) * 0.5 * (ku + kl)
            elif left[node] < 0:
                for t in range(start[node], end[node]):
                    total += kernel_from_sq(code, h2, norm,
                                            sq_dist_rows(Q, qi, P, perm[t]))
            else:
                stack[top] = right[node]
                top += 1
                stack[top] = left[node]
                top += 1
        out[qi] = total / n


kde_kernel = _jit(_kde_kernel)
