"""kd-tree construction and the three queries that share it: kNN, kFN, KDE.

The tree is a flat block of parallel arrays so the traversal kernels can
run compiled.  Construction is deterministic: split on the widest-spread
dimension (ties to the lowest dimension index) at the lower median, with
a stable sort deciding where points equal to the split value land.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import as_matrix
from .errors import ShapeError, ValidationError

__all__ = [
    "EpanechnikovKernel",
    "GaussianKernel",
    "Kernel",
    "KdTree",
    "kde",
    "kdtree_build",
    "kfn_search",
    "knn_search",
    "make_kernel",
]


@dataclass
class KdTree:
    """Immutable after build; safe for concurrent queries."""

    points: np.ndarray       # referenced, original row order
    perm: np.ndarray         # int64, leaf ranges index into this
    split_dim: np.ndarray    # int64, -1 for leaves
    split_val: np.ndarray
    left: np.ndarray         # int64 child ids, -1 for leaves
    right: np.ndarray
    start: np.ndarray        # int64 subtree range [start, end) into perm
    end: np.ndarray
    box_min: np.ndarray      # (n_nodes, d) per-dimension bounds
    box_max: np.ndarray
    leaf_size: int

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def n_nodes(self):
        return self.split_dim.shape[0]


def kdtree_build(X, leaf_size=20):
    """Build a kd-tree over the rows of X (referenced, not copied)."""
    X = as_matrix(X)
    if leaf_size < 1:
        raise ValidationError(f"leaf_size must be >= 1, got {leaf_size}")
    n, d = X.shape

    split_dim, split_val = [], []
    left, right = [], []
    start, end = [], []
    boxes_min, boxes_max = [], []
    perm = np.empty(n, dtype=np.int64)
    cursor = 0

    def build(idx):
        nonlocal cursor
        node = len(split_dim)
        split_dim.append(-1)
        split_val.append(np.nan)
        left.append(-1)
        right.append(-1)
        start.append(cursor)
        end.append(cursor)
        pts = X[idx]
        boxes_min.append(pts.min(axis=0))
        boxes_max.append(pts.max(axis=0))
        if idx.shape[0] <= leaf_size:
            perm[cursor:cursor + idx.shape[0]] = idx
            cursor += idx.shape[0]
        else:
            spread = boxes_max[node] - boxes_min[node]
            dim = int(np.argmax(spread))
            order = np.argsort(X[idx, dim], kind="stable")
            ordered = idx[order]
            mid = (idx.shape[0] - 1) // 2
            split_dim[node] = dim
            split_val[node] = X[ordered[mid], dim]
            left[node] = build(ordered[:mid + 1])
            right[node] = build(ordered[mid + 1:])
        end[node] = cursor
        return node

    if n > 0:
        build(np.arange(n, dtype=np.int64))

    return KdTree(
        points=X,
        perm=perm,
        split_dim=np.asarray(split_dim, dtype=np.int64),
        split_val=np.asarray(split_val, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        start=np.asarray(start, dtype=np.int64),
        end=np.asarray(end, dtype=np.int64),
        box_min=np.asarray(boxes_min, dtype=np.float64).reshape(-1, d),
        box_max=np.asarray(boxes_max, dtype=np.float64).reshape(-1, d),
        leaf_size=int(leaf_size),
    )


def _check_queries(tree, queries, k=None):
    Q = as_matrix(queries, "queries")
    if tree.n == 0:
        raise ValidationError("tree has no reference points")
    if Q.shape[1] != tree.dim:
        raise ShapeError(
            f"queries have {Q.shape[1]} columns, tree has {tree.dim}"
        )
    if k is not None and not 1 <= k <= tree.n:
        raise ValidationError(f"need 1 <= k <= {tree.n}, got k={k}")
    return Q


def knn_search(tree, queries, k):
    """Exact k nearest neighbors: (indices, distances), ascending distance."""
    Q = _check_queries(tree, queries, k)
    m = Q.shape[0]
    idx = np.empty((m, k), dtype=np.int64)
    d2 = np.empty((m, k), dtype=np.float64)
    K.knn_kernel(tree.points, tree.perm, tree.split_dim, tree.split_val,
                 tree.left, tree.right, tree.start, tree.end,
                 tree.box_min, tree.box_max, Q, k, idx, d2)
    return idx, np.sqrt(d2)


def kfn_search(tree, queries, k):
    """Exact k furthest neighbors: (indices, distances), descending distance."""
    Q = _check_queries(tree, queries, k)
    m = Q.shape[0]
    idx = np.empty((m, k), dtype=np.int64)
    d2 = np.empty((m, k), dtype=np.float64)
    K.kfn_kernel(tree.points, tree.perm, tree.split_dim, tree.split_val,
                 tree.left, tree.right, tree.start, tree.end,
                 tree.box_min, tree.box_max, Q, k, idx, d2)
    return idx, np.sqrt(d2)


class Kernel:
    """Distance-profile policy: value plus a monotone bound pair.

    Subclasses provide a builtin code consumed by the compiled traversal;
    ``value`` / ``value_lower`` / ``value_upper`` define the contract the
    traversal relies on: value is non-increasing in distance, and for any
    node whose point distances lie in [d_min, d_max], value_lower(d_max)
    and value_upper(d_min) bracket every point's value.
    """

    code = -1

    def __init__(self, bandwidth, dim):
        if bandwidth <= 0:
            raise ValidationError(f"bandwidth must be > 0, got {bandwidth}")
        if dim < 1:
            raise ValidationError(f"dim must be >= 1, got {dim}")
        self.bandwidth = float(bandwidth)
        self.dim = int(dim)
        self.norm = self._normalizer()

    def _normalizer(self):
        raise NotImplementedError

    def value(self, distance):
        return float(K.kernel_from_sq(self.code, self.bandwidth ** 2,
                                      self.norm, float(distance) ** 2))

    def value_lower(self, d_max):
        return self.value(d_max)

    def value_upper(self, d_min):
        return self.value(d_min)


class GaussianKernel(Kernel):
    """exp(-d^2 / 2h^2) scaled by (1 / (h * sqrt(2*pi)))^dim."""

    code = 0

    def _normalizer(self):
        return (self.bandwidth * math.sqrt(2.0 * math.pi)) ** -self.dim


class EpanechnikovKernel(Kernel):
    """(1 - (d/h)^2) on [0, h), zero beyond; normalized for dim <= 3."""

    code = 1

    _NORM = {1: 3.0 / 4.0, 2: 2.0 / math.pi, 3: 15.0 / (8.0 * math.pi)}

    def _normalizer(self):
        if self.dim not in self._NORM:
            raise ValidationError(
                f"epanechnikov kernel supports dim <= 3, got {self.dim}"
            )
        return self._NORM[self.dim] / self.bandwidth ** self.dim


_KERNELS = {"gaussian": GaussianKernel, "epanechnikov": EpanechnikovKernel}


def make_kernel(variant, bandwidth, dim):
    try:
        cls = _KERNELS[variant]
    except KeyError:
        raise ValidationError(
            f"unknown kernel {variant!r}; expected one of "
            f"{sorted(_KERNELS)}"
        ) from None
    return cls(bandwidth, dim)


def kde(tree, queries, kernel, rel_tol=0.0):
    """Density estimates (1/n) * sum_i K(|q - x_i|) per query row.

    Every returned value differs from the exact sum by at most
    rel_tol times the exact value; rel_tol = 0 evaluates exactly.
    """
    Q = _check_queries(tree, queries)
    if rel_tol < 0:
        raise ValidationError(f"rel_tol must be >= 0, got {rel_tol}")
    if kernel.dim != tree.dim:
        raise ShapeError(
            f"kernel built for dim {kernel.dim}, tree has dim {tree.dim}"
        )
    out = np.empty(Q.shape[0], dtype=np.float64)
    K.kde_kernel(tree.points, tree.perm, tree.split_dim, tree.split_val,
                 tree.left, tree.right, tree.start, tree.end,
                 tree.box_min, tree.box_max, Q, kernel.code,
                 kernel.bandwidth ** 2, kernel.norm, float(rel_tol), out)
    return out
