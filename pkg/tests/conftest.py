import numpy as np
import pytest


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240817)


def brute_knn(X, Q, k):
    """Linear-scan oracle: ascending (distance, index) per query row."""
    d2 = ((Q[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    n = X.shape[0]
    order = np.lexsort((np.tile(np.arange(n), (Q.shape[0], 1)), d2), axis=1)
    idx = order[:, :k]
    rows = np.arange(Q.shape[0])[:, None]
    return idx, np.sqrt(d2[rows, idx])


def brute_kfn(X, Q, k):
    """Linear-scan oracle: descending distance, ties ascending index."""
    d2 = ((Q[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    n = X.shape[0]
    order = np.lexsort((np.tile(np.arange(n), (Q.shape[0], 1)), -d2), axis=1)
    idx = order[:, :k]
    rows = np.arange(Q.shape[0])[:, None]
    return idx, np.sqrt(d2[rows, idx])


def blob_data(rng, n, k, d, spread=0.05, box=10.0):
    """Well-separated Gaussian blobs with roughly equal sizes."""
    centers = rng.uniform(-box, box, size=(k, d))
    labels = rng.integers(0, k, size=n)
    return centers[labels] + spread * rng.normal(size=(n, d))
