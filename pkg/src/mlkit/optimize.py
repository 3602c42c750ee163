"""Differentiable-objective contract plus the two optimizers mlkit ships.

An objective is any object with ``evaluate(params) -> float`` and
``gradient(params) -> ndarray``.  Objectives usable with ``sgd`` are
additionally *partitioned*: they expose ``num_examples`` and
``evaluate_partial(params, begin, count)`` / ``gradient_partial(params,
begin, count)`` summing the per-example terms in ``[begin, begin+count)``,
with the full objective equal to the sum over all examples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ValidationError

__all__ = [
    "OptimizationReport",
    "check_gradient",
    "gradient_descent",
    "sgd",
]

ARMIJO_C = 1e-4
ARMIJO_HALVINGS = 30


@dataclass
class OptimizationReport:
    final_params: np.ndarray
    final_loss: float
    iterations: int
    converged: bool


def _check_finite(value, what, iteration):
    if not np.all(np.isfinite(value)):
        raise DivergenceError(
            f"non-finite {what} at iteration {iteration}", iteration
        )


def gradient_descent(f, init, step, max_iters=1000, tol=1e-8,
                     backtracking=False):
    """Full-batch descent x <- x - step * grad(x).

    Stops when the relative loss change drops to ``tol`` or the iteration
    cap is reached; returns the best iterate seen.  With ``backtracking``
    the step is halved (up to 30 times) until the Armijo condition with
    c = 1e-4 holds, restarting from ``step`` each iteration.
    """
    if step <= 0:
        raise ValidationError(f"step must be > 0, got {step}")
    x = np.asarray(init, dtype=np.float64).copy()
    if not np.all(np.isfinite(x)):
        raise ValidationError("initial point must be finite")
    loss = float(f.evaluate(x))
    _check_finite(loss, "loss", 0)
    best_x = x.copy()
    best_loss = loss
    iters = 0
    converged = False
    for it in range(1, max_iters + 1):
        g = np.asarray(f.gradient(x), dtype=np.float64)
        _check_finite(g, "gradient", it)
        t = step
        if backtracking:
            g2 = float(g @ g)
            for _ in range(ARMIJO_HALVINGS):
                if float(f.evaluate(x - t * g)) <= loss - ARMIJO_C * t * g2:
                    break
                t *= 0.5
        x = x - t * g
        new_loss = float(f.evaluate(x))
        _check_finite(new_loss, "loss", it)
        iters = it
        if new_loss < best_loss:
            best_loss = new_loss
            best_x = x.copy()
        if abs(new_loss - loss) <= tol * max(1.0, abs(loss)):
            loss = new_loss
            converged = True
            break
        loss = new_loss
    return OptimizationReport(best_x, best_loss, iters, converged)


def sgd(f, init, step0, batch, epochs, rng, decay=0.0):
    """Mini-batch descent over a partitioned objective.

    Each epoch visits every example once in a fresh Fisher-Yates order
    drawn from ``rng``, summing single-example gradients per batch; the
    step at update t is step0 / (1 + t * decay).  When ``batch`` covers
    the whole set the epoch collapses to one full-range gradient call (no
    shuffle), which reproduces ``gradient_descent`` update-for-update.
    """
    if step0 <= 0:
        raise ValidationError(f"step0 must be > 0, got {step0}")
    if batch < 1:
        raise ValidationError(f"batch must be >= 1, got {batch}")
    m = f.num_examples
    x = np.asarray(init, dtype=np.float64).copy()
    t = 0
    for _ in range(epochs):
        if batch >= m:
            g = np.asarray(f.gradient_partial(x, 0, m), dtype=np.float64)
            _check_finite(g, "gradient", t + 1)
            x = x - (step0 / (1.0 + t * decay)) * g
            t += 1
            continue
        perm = rng.permutation(m)
        for lo in range(0, m, batch):
            chunk = perm[lo:lo + batch]
            g = np.zeros_like(x)
            for idx in chunk:
                g += np.asarray(f.gradient_partial(x, int(idx), 1),
                                dtype=np.float64)
            _check_finite(g, "gradient", t + 1)
            x = x - (step0 / (1.0 + t * decay)) * g
            t += 1
    loss = float(f.evaluate(x))
    _check_finite(loss, "loss", t)
    return OptimizationReport(x, loss, t, False)


def check_gradient(f, point, eps=1e-5):
    """Max relative error between analytic and central-difference gradients."""
    if eps <= 0:
        raise ValidationError(f"eps must be > 0, got {eps}")
    x = np.asarray(point, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValidationError("point must be finite")
    analytic = np.asarray(f.gradient(x), dtype=np.float64)
    worst = 0.0
    for i in range(x.shape[0]):
        hi = x.copy()
        lo = x.copy()
        hi[i] += eps
        lo[i] -= eps
        numeric = (float(f.evaluate(hi)) - float(f.evaluate(lo))) / (2 * eps)
        err = abs(analytic[i] - numeric) / max(1.0, abs(numeric))
        worst = max(worst, err)
    return worst
