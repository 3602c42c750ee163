"""k-means: k-means++ seeding, Lloyd iteration, and Hamerly's exact acceleration.

Both solvers share the same assignment tie rule (lowest centroid index),
the same empty-cluster repair (steal the point farthest from its own
centroid, donors keep at least one member, ties to the lowest point
index), the same mean-update accumulation order, and the same stopping
rule (max centroid displacement <= tol).  Hamerly's algorithm therefore
reproduces Lloyd's output bit-for-bit while skipping most distance
computations; it additionally reports how many it performed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .core import as_matrix
from .errors import ValidationError

__all__ = [
    "KMeansModel",
    "KMeansResult",
    "kmeans_assign",
    "kmeans_hamerly",
    "kmeans_lloyd",
    "kmeanspp_init",
]


@dataclass
class KMeansResult:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int
    distance_computations: int
    inertia_trace: list[float] = field(default_factory=list)


@dataclass
class KMeansModel:
    """The predictive part of a clustering: just the centroids."""

    centroids: np.ndarray

    def __post_init__(self):
        self.centroids = as_matrix(self.centroids, "centroids")


def kmeanspp_init(X, k, rng):
    """k-means++ seeding, fully determined by the rng seed.

    The first centroid is a uniformly drawn row; each later one is drawn
    with probability proportional to the squared distance to the nearest
    centroid chosen so far.  If every remaining point duplicates a chosen
    centroid, the lowest-index unchosen row is taken.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.below(n)
    d2 = np.sum((X - X[chosen[0]]) ** 2, axis=1)
    taken = np.zeros(n, dtype=bool)
    taken[chosen[0]] = True
    for t in range(1, k):
        total = float(d2.sum())
        pick = -1
        if total > 0.0:
            r = rng.uniform() * total
            cum = 0.0
            for i in range(n):
                cum += d2[i]
                if r < cum:
                    pick = i
                    break
        if pick < 0:
            for i in range(n):
                if not taken[i]:
                    pick = i
                    break
        chosen[t] = pick
        taken[pick] = True
        d2 = np.minimum(d2, np.sum((X - X[pick]) ** 2, axis=1))
    return X[chosen].copy()


def _validate(X, init_centroids):
    X = as_matrix(X)
    C = as_matrix(init_centroids, "init_centroids")
    n, d = X.shape
    k = C.shape[0]
    if n == 0:
        raise ValidationError("cannot cluster an empty matrix")
    if C.shape[1] != d:
        raise ValidationError(
            f"centroids have {C.shape[1]} columns, data has {d}"
        )
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not np.isfinite(C).all():
        raise ValidationError("initial centroids must be finite")
    return X, C


def kmeans_lloyd(X, init_centroids, max_iter=100, tol=1e-6):
    """Plain alternating assignment / mean update."""
    X, C = _validate(X, init_centroids)
    n = X.shape[0]
    k = C.shape[0]
    C = C.copy()
    newC = np.empty_like(C)
    assign = np.empty(n, dtype=np.int64)
    d2 = np.empty(n)
    drifts = np.empty(k)
    ndist = 0
    trace = []
    iters = 0
    while iters < max_iter:
        iters += 1
        ndist += K.assign_full(X, C, assign, d2)
        trace.append(float(d2.sum()))
        counts = np.bincount(assign, minlength=k).astype(np.int64)
        ndist += K.repair_empty(X, C, assign, d2, counts)
        K.update_centroids(X, assign, k, newC)
        ndist += K.centroid_drifts(C, newC, drifts)
        shift = float(drifts.max())
        C, newC = newC, C
        if shift <= tol:
            break
    # final pass so assignments refer to the final centroids
    ndist += K.assign_full(X, C, assign, d2)
    counts = np.bincount(assign, minlength=k).astype(np.int64)
    ndist += K.repair_empty(X, C, assign, d2, counts)
    inertia = K.inertia_from(X, C, assign)
    ndist += n
    return KMeansResult(C, assign, float(inertia), iters, ndist, trace)


def kmeans_hamerly(X, init_centroids, max_iter=100, tol=1e-6):
    """Bound-pruned k-means; output is bit-identical to ``kmeans_lloyd``."""
    X, C = _validate(X, init_centroids)
    n = X.shape[0]
    k = C.shape[0]
    C = C.copy()
    newC = np.empty_like(C)
    assign = np.empty(n, dtype=np.int64)
    upper = np.empty(n)
    lower = np.empty(n)
    d2 = np.empty(n)
    s = np.empty(k)
    drifts = np.empty(k)
    ndist = 0
    iters = 0
    while iters < max_iter:
        iters += 1
        if iters == 1:
            ndist += K.hamerly_init(X, C, assign, upper, lower, d2)
        else:
            ndist += K.half_separation(C, s)
            ndist += K.hamerly_pass(X, C, assign, upper, lower, d2, s)
        ndist += _hamerly_repair(X, C, assign, upper, lower, d2, k)
        K.update_centroids(X, assign, k, newC)
        ndist += K.centroid_drifts(C, newC, drifts)
        shift = float(drifts.max())
        K.update_bounds(assign, upper, lower, drifts)
        C, newC = newC, C
        if shift <= tol:
            break
    ndist += K.half_separation(C, s)
    ndist += K.hamerly_pass(X, C, assign, upper, lower, d2, s)
    ndist += _hamerly_repair(X, C, assign, upper, lower, d2, k)
    inertia = K.inertia_from(X, C, assign)
    ndist += n
    return KMeansResult(C, assign, float(inertia), iters, ndist, [])


def _hamerly_repair(X, C, assign, upper, lower, d2, k):
    """Mirror Lloyd's empty-cluster repair, then re-validate the bounds."""
    counts = np.bincount(assign, minlength=k).astype(np.int64)
    if not (counts == 0).any():
        return 0
    ndist = K.refresh_d2(X, C, assign, d2)
    ndist += K.repair_empty(X, C, assign, d2, counts)
    np.sqrt(d2, out=upper)
    lower[:] = 0.0
    return ndist


def kmeans_assign(model, X):
    """Nearest-centroid labels for new data, ties to the lowest index."""
    X = as_matrix(X)
    C = model.centroids
    if X.shape[1] != C.shape[1]:
        raise ValidationError(
            f"data has {X.shape[1]} columns, centroids have {C.shape[1]}"
        )
    assign = np.empty(X.shape[0], dtype=np.int64)
    inertia = K.nearest_assign_d2_sum(X, C, assign)
    return assign, float(inertia)
