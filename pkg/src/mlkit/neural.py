"""Minimal feedforward classifier: Linear / ReLU / LogSoftmax layers,
negative log-likelihood loss, hand-coded backprop.

The parameter vector used by the optimizer is the concatenation of each
Linear layer's weight matrix (row-major) followed by its bias, in layer
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix
from .errors import DivergenceError, ShapeError, ValidationError
from .optimize import OptimizationReport, sgd

__all__ = [
    "FFNModel",
    "FFNObjective",
    "LinearLayer",
    "LogSoftmaxLayer",
    "ReLULayer",
    "ffn_classify",
    "ffn_create",
    "ffn_forward",
    "ffn_loss_grad",
    "ffn_train",
]


@dataclass
class LinearLayer:
    W: np.ndarray  # (out, in)
    b: np.ndarray  # (out,)

    def __post_init__(self):
        self.W = np.ascontiguousarray(self.W, dtype=np.float64)
        self.b = np.ascontiguousarray(self.b, dtype=np.float64)
        if self.W.ndim != 2 or self.b.ndim != 1 or \
                self.W.shape[0] != self.b.shape[0]:
            raise ShapeError("linear layer needs W (out, in) and b (out,)")


@dataclass
class ReLULayer:
    pass


@dataclass
class LogSoftmaxLayer:
    pass


@dataclass
class FFNModel:
    layers: list = field(default_factory=list)
    input_dim: int = 0

    def __post_init__(self):
        dim = self.input_dim
        for i, layer in enumerate(self.layers):
            if isinstance(layer, LinearLayer):
                if layer.W.shape[1] != dim:
                    raise ShapeError(
                        f"layer {i} expects {layer.W.shape[1]} inputs, "
                        f"previous width is {dim}"
                    )
                dim = layer.W.shape[0]
        self.output_dim = dim

    def copy(self):
        layers = []
        for layer in self.layers:
            if isinstance(layer, LinearLayer):
                layers.append(LinearLayer(layer.W.copy(), layer.b.copy()))
            else:
                layers.append(type(layer)())
        return FFNModel(layers, self.input_dim)


def ffn_create(input_dim, hidden_widths, num_classes):
    """Linear+ReLU stack of the given widths, ending Linear+LogSoftmax.

    All weights start at zero; ``ffn_train`` draws the real initialization.
    """
    if num_classes < 2:
        raise ValidationError(f"need >= 2 classes, got {num_classes}")
    layers = []
    prev = input_dim
    for width in hidden_widths:
        layers.append(LinearLayer(np.zeros((width, prev)), np.zeros(width)))
        layers.append(ReLULayer())
        prev = width
    layers.append(LinearLayer(np.zeros((num_classes, prev)),
                              np.zeros(num_classes)))
    layers.append(LogSoftmaxLayer())
    return FFNModel(layers, input_dim)


def _log_softmax(z):
    shifted = z - z.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _forward_cached(model, X):
    """Activations entering each layer, plus the final output last."""
    acts = [X]
    a = X
    for i, layer in enumerate(model.layers):
        if isinstance(layer, LinearLayer):
            if a.shape[1] != layer.W.shape[1]:
                raise ShapeError(
                    f"layer {i} expects {layer.W.shape[1]} inputs, "
                    f"got {a.shape[1]}"
                )
            a = a @ layer.W.T + layer.b
        elif isinstance(layer, ReLULayer):
            a = np.maximum(a, 0.0)
        elif isinstance(layer, LogSoftmaxLayer):
            a = _log_softmax(a)
        else:
            raise ValidationError(f"unknown layer type at index {i}")
        acts.append(a)
    return acts


def ffn_forward(model, X):
    """Log-probabilities, one row per input row."""
    X = as_matrix(X)
    if X.shape[1] != model.input_dim:
        raise ShapeError(
            f"model expects {model.input_dim} features, got {X.shape[1]} "
            f"(layer 0)"
        )
    return _forward_cached(model, X)[-1]


def ffn_classify(model, X):
    """argmax class per row; exact ties resolve to the lower class index."""
    return np.argmax(ffn_forward(model, X), axis=1).astype(np.int64)


def params_to_vector(model):
    parts = []
    for layer in model.layers:
        if isinstance(layer, LinearLayer):
            parts.append(layer.W.reshape(-1))
            parts.append(layer.b)
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def vector_to_params(model, vec):
    """New model with Linear parameters taken from the flat vector."""
    out = model.copy()
    pos = 0
    for layer in out.layers:
        if isinstance(layer, LinearLayer):
            size = layer.W.size
            layer.W[:] = vec[pos:pos + size].reshape(layer.W.shape)
            pos += size
            layer.b[:] = vec[pos:pos + layer.b.shape[0]]
            pos += layer.b.shape[0]
    if pos != vec.shape[0]:
        raise ShapeError(
            f"parameter vector has {vec.shape[0]} entries, model needs {pos}"
        )
    return out


def _loss_grad_rows(model, X, y, scale):
    """NLL summed over these rows times ``scale``, with matching gradient."""
    acts = _forward_cached(model, X)
    logp = acts[-1]
    m = X.shape[0]
    rows = np.arange(m)
    loss = -float(logp[rows, y].sum()) * scale
    delta = np.exp(logp)
    delta[rows, y] -= 1.0
    delta *= scale
    grads = []
    for i in range(len(model.layers) - 1, -1, -1):
        layer = model.layers[i]
        a_in = acts[i]
        if isinstance(layer, LinearLayer):
            grads.append((delta.T @ a_in, delta.sum(axis=0)))
            delta = delta @ layer.W
        elif isinstance(layer, ReLULayer):
            delta = delta * (a_in > 0.0)
        # LogSoftmax: delta already holds d(loss)/d(logits)
    flat = []
    for dW, db in reversed(grads):
        flat.append(dW.reshape(-1))
        flat.append(db)
    return loss, np.concatenate(flat)


def ffn_loss_grad(model, ds):
    """Mean NLL over the dataset and the full backprop gradient."""
    X = ds.features
    if X.shape[1] != model.input_dim:
        raise ShapeError(
            f"model expects {model.input_dim} features, got {X.shape[1]} "
            f"(layer 0)"
        )
    if ds.labels.size and ds.labels.max() >= model.output_dim:
        raise ValidationError(
            f"label {int(ds.labels.max())} out of range for "
            f"{model.output_dim} outputs"
        )
    return _loss_grad_rows(model, X, ds.labels, 1.0 / ds.n)


class FFNObjective:
    """Partitioned optimizer objective over a model architecture + dataset."""

    def __init__(self, model, ds):
        if ds.labels.size and ds.labels.max() >= model.output_dim:
            raise ValidationError(
                f"label {int(ds.labels.max())} out of range for "
                f"{model.output_dim} outputs"
            )
        self.model = model
        self.ds = ds

    @property
    def num_examples(self):
        return self.ds.n

    def evaluate(self, params):
        m = vector_to_params(self.model, params)
        return ffn_loss_grad(m, self.ds)[0]

    def gradient(self, params):
        m = vector_to_params(self.model, params)
        return ffn_loss_grad(m, self.ds)[1]

    def evaluate_partial(self, params, begin, count):
        m = vector_to_params(self.model, params)
        sl = slice(begin, begin + count)
        return _loss_grad_rows(m, self.ds.features[sl], self.ds.labels[sl],
                               1.0 / self.ds.n)[0]

    def gradient_partial(self, params, begin, count):
        m = vector_to_params(self.model, params)
        sl = slice(begin, begin + count)
        return _loss_grad_rows(m, self.ds.features[sl], self.ds.labels[sl],
                               1.0 / self.ds.n)[1]


def _glorot_init(model, rng):
    """Uniform(+-sqrt(6/(in+out))) weights drawn row-major, zero biases."""
    out = model.copy()
    for layer in out.layers:
        if not isinstance(layer, LinearLayer):
            continue
        fan_out, fan_in = layer.W.shape
        a = math.sqrt(6.0 / (fan_in + fan_out))
        for r in range(fan_out):
            for c in range(fan_in):
                layer.W[r, c] = (2.0 * rng.uniform() - 1.0) * a
        layer.b[:] = 0.0
    return out


def ffn_train(model, ds, rng, step0=0.5, batch=32, epochs=200, decay=0.0):
    """Glorot-initialize the Linear layers from ``rng``, then run SGD.

    Deterministic under a fixed seed.  A diverging run returns the
    initialized model and a non-converged report instead of raising.
    """
    if ds.n < 1:
        raise ValidationError("need at least one training row")
    init_model = _glorot_init(model, rng)
    objective = FFNObjective(init_model, ds)
    params0 = params_to_vector(init_model)
    try:
        report = sgd(objective, params0, step0, batch, epochs, rng,
                     decay=decay)
    except DivergenceError as exc:
        report = OptimizationReport(params0, float("nan"), exc.iteration,
                                    False)
        return init_model, report
    return vector_to_params(init_model, report.final_params), report
