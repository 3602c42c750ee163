"""Dense matrices, labeled datasets, CSV I/O, and deterministic randomness.

The one numeric currency everywhere in mlkit is a C-contiguous 2-D
``numpy.ndarray`` of float64, row-major.  CSV files round-trip losslessly
because floats are written in their shortest round-trip decimal form.

``SeededRng`` is the only random generator permitted in the codebase.  Its
stream is fully specified so that any reimplementation reproduces it
bit-for-bit:

* state update and mixing follow SplitMix64,
* ``uniform()`` is ``(next_u64() >> 11) * 2**-53``,
* ``below(n)`` is ``next_u64() % n``,
* ``permutation(n)`` is a Fisher-Yates shuffle of ``0..n-1`` walking
  ``i = n-1 .. 1`` with ``j = below(i + 1)``.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeError, ValidationError

__all__ = [
    "LabeledDataset",
    "SeededRng",
    "as_matrix",
    "as_vector",
    "load_csv",
    "save_csv",
    "format_float",
    "train_test_split",
]

_MASK64 = (1 << 64) - 1


def as_matrix(values, name="matrix"):
    """Coerce to a C-contiguous float64 2-D array, or raise ShapeError."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got {arr.ndim}-D")
    return arr


def as_vector(values, name="vector"):
    """Coerce to a contiguous float64 1-D array, or raise ShapeError."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim == 2 and (arr.shape[0] == 1 or arr.shape[1] == 1):
        arr = np.ascontiguousarray(arr.reshape(-1))
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got {arr.ndim}-D")
    return arr


def format_float(x):
    """Shortest decimal string that parses back to exactly ``x``."""
    return repr(float(x))


def _read_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, bytes):
        data = source
    elif hasattr(source, "read"):
        data = source.read()
        if isinstance(data, str):
            return data
    else:
        raise TypeError(f"unsupported CSV source: {type(source)!r}")
    return data.decode("utf-8")


def load_csv(source, has_header=False):
    """Parse comma-separated float text into a matrix.

    Rows are separated by LF or CRLF; empty lines are skipped.  Every data
    row must have the same field count as the first one.
    """
    text = _read_text(source)
    lines = text.split("\n")
    rows = []
    ncols = -1
    first = True
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        if line == "":
            continue
        if first and has_header:
            first = False
            continue
        first = False
        fields = line.split(",")
        if ncols == -1:
            ncols = len(fields)
        elif len(fields) != ncols:
            raise ParseError(
                f"line {lineno}: expected {ncols} fields, got {len(fields)}"
            )
        row = np.empty(ncols, dtype=np.float64)
        for col, field in enumerate(fields):
            try:
                row[col] = float(field)
            except ValueError:
                raise ParseError(
                    f"line {lineno}, column {col + 1}: "
                    f"cannot parse {field!r} as a float"
                ) from None
        rows.append(row)
    if has_header and first:
        raise ParseError("expected a header line, got empty input")
    if not rows:
        return np.empty((0, 0), dtype=np.float64)
    return np.ascontiguousarray(np.vstack(rows))


def save_csv(matrix, sink):
    """Write a matrix as CSV (LF line endings, round-trip-exact floats).

    A matrix with zero rows produces empty output.  Matrices with rows but
    zero columns also serialize to empty output and therefore do not
    round-trip; every other finite matrix reloads element-for-element.
    """
    m = as_matrix(matrix)
    out = io.StringIO()
    for i in range(m.shape[0]):
        out.write(",".join(format_float(v) for v in m[i]))
        out.write("\n")
    data = out.getvalue().encode("utf-8")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            fh.write(data)
    elif hasattr(sink, "write"):
        try:
            sink.write(data)
        except TypeError:
            sink.write(data.decode("utf-8"))
    else:
        raise TypeError(f"unsupported CSV sink: {type(sink)!r}")


class SeededRng:
    """SplitMix64 generator; the only source of randomness in mlkit."""

    __slots__ = ("state",)

    def __init__(self, seed=0):
        self.state = int(seed) & _MASK64

    def next_u64(self):
        """Advance the state and return the next 64-bit output."""
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, bound):
        """Uniform-ish integer in [0, bound) via modulo reduction."""
        if bound <= 0:
            raise ValidationError(f"bound must be positive, got {bound}")
        return self.next_u64() % bound

    def permutation(self, n):
        """Fisher-Yates permutation of 0..n-1 as an int64 array."""
        perm = np.arange(n, dtype=np.int64)
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


@dataclass
class LabeledDataset:
    """Feature matrix paired with non-negative integer class labels."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.features = as_matrix(self.features, "features")
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise ShapeError(f"labels must be 1-D, got {labels.ndim}-D")
        if labels.size and not np.all(labels == np.floor(labels)):
            raise ValidationError("labels must be integers")
        labels = labels.astype(np.int64)
        if labels.size and labels.min() < 0:
            raise ValidationError("labels must be non-negative")
        if labels.shape[0] != self.features.shape[0]:
            raise ShapeError(
                f"{self.features.shape[0]} feature rows but "
                f"{labels.shape[0]} labels"
            )
        self.labels = labels

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def num_classes(self):
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def subset(self, idx):
        return LabeledDataset(self.features[idx], self.labels[idx])


def train_test_split(ds, test_fraction, rng):
    """Disjoint shuffle split; test size is round(n * test_fraction).

    The shuffle is a Fisher-Yates permutation drawn from ``rng``; the first
    ``n_test`` shuffled rows form the test set.  Rounding is half-up.
    """
    if not 0.0 <= test_fraction <= 1.0:
        raise ValidationError(
            f"test_fraction must be in [0, 1], got {test_fraction}"
        )
    n = ds.n
    n_test = int(np.floor(n * test_fraction + 0.5))
    perm = rng.permutation(n)
    test_idx = perm[:n_test]
    train_idx = perm[n_test:]
    return ds.subset(train_idx), ds.subset(test_idx)
