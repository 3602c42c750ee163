"""Linear regression (ridge-capable) and binary logistic regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import LabeledDataset, as_matrix, as_vector
from .errors import RankDeficiencyError, ShapeError, ValidationError
from .optimize import OptimizationReport, gradient_descent

__all__ = [
    "LinearRegressionModel",
    "LogisticObjective",
    "LogisticRegressionModel",
    "linreg_predict",
    "linreg_train",
    "logreg_classify",
    "logreg_objective",
    "logreg_train",
]


@dataclass
class LinearRegressionModel:
    """weights[0] is the intercept; weights[1:] multiply the features."""

    weights: np.ndarray
    lambda_: float = 0.0

    def __post_init__(self):
        self.weights = as_vector(self.weights, "weights")
        if self.lambda_ < 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lambda_}")

    @property
    def dim(self):
        return self.weights.shape[0] - 1


@dataclass
class LogisticRegressionModel:
    weights: np.ndarray
    lambda_: float = 0.0
    decision_threshold: float = 0.5

    def __post_init__(self):
        self.weights = as_vector(self.weights, "weights")
        if self.lambda_ < 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lambda_}")
        if not 0.0 < self.decision_threshold < 1.0:
            raise ValidationError(
                f"decision_threshold must be in (0, 1), "
                f"got {self.decision_threshold}"
            )

    @property
    def dim(self):
        return self.weights.shape[0] - 1


def linreg_train(X, y, lambda_=0.0):
    """Ridge solve of (X~'X~ + lambda*I~) b = X~'y, intercept unpenalized.

    X~ prepends a ones column; I~ is the identity with the intercept
    diagonal zeroed.  Uses a symmetric positive-definite factorization and
    reports rank deficiency (suggesting lambda > 0) when it fails.
    """
    X = as_matrix(X)
    y = as_vector(y, "y")
    if lambda_ < 0:
        raise ValidationError(f"lambda must be >= 0, got {lambda_}")
    n, d = X.shape
    if n < 1:
        raise ValidationError("need at least one training row")
    if y.shape[0] != n:
        raise ShapeError(f"{n} rows but {y.shape[0]} responses")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValidationError("training data must be finite")
    Xt = np.hstack([np.ones((n, 1)), X])
    gram = Xt.T @ Xt
    reg = np.eye(d + 1) * lambda_
    reg[0, 0] = 0.0
    rhs = Xt.T @ y
    try:
        factor = scipy.linalg.cho_factor(gram + reg)
        weights = scipy.linalg.cho_solve(factor, rhs)
    except np.linalg.LinAlgError as exc:
        raise RankDeficiencyError(
            f"singular system ({exc}); try lambda > 0"
        ) from None
    return LinearRegressionModel(weights, float(lambda_))


def linreg_predict(model, X):
    X = as_matrix(X)
    if X.shape[1] != model.dim:
        raise ShapeError(
            f"model expects {model.dim} features, got {X.shape[1]}"
        )
    return model.weights[0] + X @ model.weights[1:]


def _scores(weights, X):
    return weights[0] + X @ weights[1:]


def _stable_log1pexp(z):
    # max(z, 0) + log1p(exp(-|z|)): overflow-free for any finite z
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_objective(weights, ds, lambda_=0.0):
    """Mean logistic loss and its gradient, L2 penalty on non-intercept weights."""
    weights = as_vector(weights, "weights")
    if ds.labels.size and ds.labels.max() > 1:
        raise ValidationError("logistic regression requires labels in {0, 1}")
    X = ds.features
    y = ds.labels.astype(np.float64)
    n = X.shape[0]
    if weights.shape[0] != X.shape[1] + 1:
        raise ShapeError(
            f"expected {X.shape[1] + 1} weights, got {weights.shape[0]}"
        )
    z = _scores(weights, X)
    w = weights[1:]
    loss = float(np.sum(_stable_log1pexp(z) - y * z) / n
                 + 0.5 * lambda_ * float(w @ w))
    resid = _sigmoid(z) - y
    grad = np.empty_like(weights)
    grad[0] = resid.sum() / n
    grad[1:] = X.T @ resid / n + lambda_ * w
    return loss, grad


class LogisticObjective:
    """Adapter exposing the optimizer contract over a fixed dataset."""

    def __init__(self, ds, lambda_=0.0):
        self.ds = ds
        self.lambda_ = lambda_

    def evaluate(self, params):
        return logreg_objective(params, self.ds, self.lambda_)[0]

    def gradient(self, params):
        return logreg_objective(params, self.ds, self.lambda_)[1]


def logreg_train(ds, lambda_=0.0, step=1.0, max_iters=200, tol=1e-9,
                 decision_threshold=0.5):
    """Backtracking gradient descent from zero weights; deterministic.

    On separable data with lambda = 0 the weights grow without bound; that
    surfaces as a non-converged report, never a crash.
    """
    if ds.n < 1:
        raise ValidationError("need at least one training row")
    if ds.num_classes != 2:
        raise ValidationError(
            f"need both classes 0 and 1 present, got {ds.num_classes} class(es)"
        )
    objective = LogisticObjective(ds, lambda_)
    init = np.zeros(ds.features.shape[1] + 1)
    report = gradient_descent(objective, init, step, max_iters, tol,
                              backtracking=True)
    model = LogisticRegressionModel(report.final_params, float(lambda_),
                                    float(decision_threshold))
    return model, report


def logreg_classify(model, X):
    """Labels and probabilities; label 1 iff probability strictly exceeds
    the threshold, so ties go to class 0."""
    X = as_matrix(X)
    if X.shape[1] != model.dim:
        raise ShapeError(
            f"model expects {model.dim} features, got {X.shape[1]}"
        )
    prob = _sigmoid(_scores(model.weights, X))
    labels = (prob > model.decision_threshold).astype(np.int64)
    return labels, prob
