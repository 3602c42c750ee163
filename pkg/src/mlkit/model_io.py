"""Versioned model serialization: one envelope for every trained model.

File layout (all multi-byte integers little-endian):

    magic   4 bytes  b"MLK1"
    format  1 byte   0x01 binary payload, 0x02 text payload
    tag     u64 length + that many ASCII bytes (registered model type)
    version u32      payload schema version for that type
    payload to end of file

Binary payloads use u64 lengths/counts and raw IEEE-754 f64 bit patterns;
text payloads are line-oriented key/value documents whose floats use the
shortest round-trip decimal form.  Either way, saving is a pure function
of the model: equal models produce byte-identical files, and a reader
returns a complete model or raises, never a partial object.
"""

from __future__ import annotations

import io
import os
import struct

import numpy as np

from .clustering import KMeansModel
from .core import format_float
from .errors import (
    CorruptModelFileError,
    NewerVersionError,
    NotAModelFileError,
    UnknownModelTypeError,
    ValidationError,
)
from .linear_models import LinearRegressionModel, LogisticRegressionModel
from .neural import FFNModel, LinearLayer, LogSoftmaxLayer, ReLULayer

__all__ = [
    "FORMAT_BINARY",
    "FORMAT_TEXT",
    "load_model",
    "model_from_bytes",
    "model_to_bytes",
    "models_equal",
    "registered_types",
    "save_model",
    "type_tag_for",
]

MAGIC = b"MLK1"
FORMAT_BINARY = "binary"
FORMAT_TEXT = "text"
_FORMAT_BYTE = {FORMAT_BINARY: 0x01, FORMAT_TEXT: 0x02}


class _Writer:
    def __init__(self):
        self.buf = io.BytesIO()

    def u8(self, v):
        self.buf.write(struct.pack("<B", v))

    def u32(self, v):
        self.buf.write(struct.pack("<I", v))

    def u64(self, v):
        self.buf.write(struct.pack("<Q", v))

    def f64(self, v):
        self.buf.write(struct.pack("<d", v))

    def f64_array(self, arr):
        self.buf.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())

    def raw(self, data):
        self.buf.write(data)

    def getvalue(self):
        return self.buf.getvalue()


class _Reader:
    def __init__(self, data, offset=0):
        self.data = data
        self.pos = offset

    def take(self, n, what):
        if self.pos + n > len(self.data):
            raise CorruptModelFileError(
                f"corrupt model file: unexpected end reading {what} "
                f"at byte {self.pos}", offset=self.pos
            )
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self, what="byte"):
        return struct.unpack("<B", self.take(1, what))[0]

    def u32(self, what="u32"):
        return struct.unpack("<I", self.take(4, what))[0]

    def u64(self, what="u64"):
        return struct.unpack("<Q", self.take(8, what))[0]

    def f64(self, what="f64"):
        return struct.unpack("<d", self.take(8, what))[0]

    def f64_array(self, count, what="f64 array"):
        raw = self.take(8 * count, what)
        return np.frombuffer(raw, dtype="<f8").astype(np.float64)

    def expect_end(self):
        if self.pos != len(self.data):
            raise CorruptModelFileError(
                f"corrupt model file: {len(self.data) - self.pos} trailing "
                f"bytes at byte {self.pos}", offset=self.pos
            )


class _TextReader:
    """Line-oriented payload reader tracking byte offsets for errors."""

    def __init__(self, payload, base_offset):
        self.lines = []
        pos = 0
        for line in payload.split(b"\n"):
            self.lines.append((base_offset + pos, line.decode("utf-8")))
            pos += len(line) + 1
        self.idx = 0

    def next_fields(self, key):
        while self.idx < len(self.lines) and self.lines[self.idx][1] == "":
            self.idx += 1
        if self.idx >= len(self.lines):
            raise CorruptModelFileError(
                f"corrupt model file: missing {key!r} line"
            )
        offset, line = self.lines[self.idx]
        self.idx += 1
        fields = line.split(" ")
        if fields[0] != key:
            raise CorruptModelFileError(
                f"corrupt model file: expected {key!r}, got {fields[0]!r} "
                f"at byte {offset}", offset=offset
            )
        return offset, fields[1:]

    def scalar(self, key, conv):
        offset, rest = self.next_fields(key)
        if len(rest) != 1:
            raise CorruptModelFileError(
                f"corrupt model file: {key!r} needs one value at byte "
                f"{offset}", offset=offset
            )
        try:
            return conv(rest[0])
        except ValueError:
            raise CorruptModelFileError(
                f"corrupt model file: bad {key!r} value {rest[0]!r} at byte "
                f"{offset}", offset=offset
            ) from None

    def floats(self, key, count):
        offset, rest = self.next_fields(key)
        if len(rest) != count:
            raise CorruptModelFileError(
                f"corrupt model file: {key!r} needs {count} values, got "
                f"{len(rest)} at byte {offset}", offset=offset
            )
        try:
            return np.array([float(v) for v in rest], dtype=np.float64)
        except ValueError:
            raise CorruptModelFileError(
                f"corrupt model file: bad float in {key!r} at byte {offset}",
                offset=offset
            ) from None

    def expect_end(self):
        while self.idx < len(self.lines) and self.lines[self.idx][1] == "":
            self.idx += 1
        if self.idx < len(self.lines):
            offset, line = self.lines[self.idx]
            raise CorruptModelFileError(
                f"corrupt model file: trailing line {line!r} at byte "
                f"{offset}", offset=offset
            )


# ---------------------------------------------------------------------------
# per-type codecs
# ---------------------------------------------------------------------------

def _linreg_write_binary(model, w):
    w.u64(model.dim)
    w.f64(model.lambda_)
    w.f64_array(model.weights)


def _linreg_read_binary(r, version):
    d = r.u64("dimension")
    lam = r.f64("lambda")
    weights = r.f64_array(d + 1, "weights")
    return LinearRegressionModel(weights, lam)


def _linreg_write_text(model, out):
    out.append(f"dim {model.dim}")
    out.append(f"lambda {format_float(model.lambda_)}")
    out.append("weights " + " ".join(format_float(v) for v in model.weights))


def _linreg_read_text(r, version):
    d = r.scalar("dim", int)
    lam = r.scalar("lambda", float)
    weights = r.floats("weights", d + 1)
    return LinearRegressionModel(weights, lam)


def _logreg_write_binary(model, w):
    w.u64(model.dim)
    w.f64(model.lambda_)
    w.f64(model.decision_threshold)
    w.f64_array(model.weights)


def _logreg_read_binary(r, version):
    d = r.u64("dimension")
    lam = r.f64("lambda")
    threshold = r.f64("decision_threshold")
    weights = r.f64_array(d + 1, "weights")
    return LogisticRegressionModel(weights, lam, threshold)


def _logreg_write_text(model, out):
    out.append(f"dim {model.dim}")
    out.append(f"lambda {format_float(model.lambda_)}")
    out.append(f"decision_threshold {format_float(model.decision_threshold)}")
    out.append("weights " + " ".join(format_float(v) for v in model.weights))


def _logreg_read_text(r, version):
    d = r.scalar("dim", int)
    lam = r.scalar("lambda", float)
    threshold = r.scalar("decision_threshold", float)
    weights = r.floats("weights", d + 1)
    return LogisticRegressionModel(weights, lam, threshold)


def _kmeans_write_binary(model, w):
    k, d = model.centroids.shape
    w.u64(k)
    w.u64(d)
    w.f64_array(model.centroids)


def _kmeans_read_binary(r, version):
    k = r.u64("clusters")
    d = r.u64("dimension")
    centroids = r.f64_array(k * d, "centroids").reshape(k, d)
    return KMeansModel(centroids)


def _kmeans_write_text(model, out):
    k, d = model.centroids.shape
    out.append(f"clusters {k}")
    out.append(f"dim {d}")
    for row in model.centroids:
        out.append("centroid " + " ".join(format_float(v) for v in row))


def _kmeans_read_text(r, version):
    k = r.scalar("clusters", int)
    d = r.scalar("dim", int)
    centroids = np.empty((k, d), dtype=np.float64)
    for i in range(k):
        centroids[i] = r.floats("centroid", d)
    return KMeansModel(centroids)


_LAYER_BYTE = {LinearLayer: 1, ReLULayer: 2, LogSoftmaxLayer: 3}


def _ffn_write_binary(model, w):
    w.u64(model.input_dim)
    w.u64(len(model.layers))
    for layer in model.layers:
        w.u8(_LAYER_BYTE[type(layer)])
        if isinstance(layer, LinearLayer):
            w.u64(layer.W.shape[0])
            w.u64(layer.W.shape[1])
            w.f64_array(layer.W)
            w.f64_array(layer.b)


def _ffn_read_binary(r, version):
    input_dim = r.u64("input_dim")
    n_layers = r.u64("layer count")
    layers = []
    for _ in range(n_layers):
        kind = r.u8("layer type")
        if kind == 1:
            out_w = r.u64("layer rows")
            in_w = r.u64("layer cols")
            W = r.f64_array(out_w * in_w, "weights").reshape(out_w, in_w)
            b = r.f64_array(out_w, "bias")
            layers.append(LinearLayer(W, b))
        elif kind == 2:
            layers.append(ReLULayer())
        elif kind == 3:
            layers.append(LogSoftmaxLayer())
        else:
            raise CorruptModelFileError(
                f"corrupt model file: unknown layer type {kind} at byte "
                f"{r.pos - 1}", offset=r.pos - 1
            )
    return FFNModel(layers, input_dim)


def _ffn_write_text(model, out):
    out.append(f"input_dim {model.input_dim}")
    out.append(f"layers {len(model.layers)}")
    for layer in model.layers:
        if isinstance(layer, LinearLayer):
            out.append(f"layer linear {layer.W.shape[0]} {layer.W.shape[1]}")
            out.append("weights " + " ".join(format_float(v)
                                             for v in layer.W.reshape(-1)))
            out.append("bias " + " ".join(format_float(v) for v in layer.b))
        elif isinstance(layer, ReLULayer):
            out.append("layer relu")
        else:
            out.append("layer logsoftmax")


def _ffn_read_text(r, version):
    input_dim = r.scalar("input_dim", int)
    n_layers = r.scalar("layers", int)
    layers = []
    for _ in range(n_layers):
        offset, rest = r.next_fields("layer")
        if rest and rest[0] == "linear":
            if len(rest) != 3:
                raise CorruptModelFileError(
                    f"corrupt model file: bad linear layer header at byte "
                    f"{offset}", offset=offset
                )
            out_w, in_w = int(rest[1]), int(rest[2])
            W = r.floats("weights", out_w * in_w).reshape(out_w, in_w)
            b = r.floats("bias", out_w)
            layers.append(LinearLayer(W, b))
        elif rest == ["relu"]:
            layers.append(ReLULayer())
        elif rest == ["logsoftmax"]:
            layers.append(LogSoftmaxLayer())
        else:
            raise CorruptModelFileError(
                f"corrupt model file: unknown layer {rest!r} at byte "
                f"{offset}", offset=offset
            )
    return FFNModel(layers, input_dim)


class _Codec:
    def __init__(self, tag, cls, version, write_binary, read_binary,
                 write_text, read_text):
        self.tag = tag
        self.cls = cls
        self.version = version
        self.write_binary = write_binary
        self.read_binary = read_binary
        self.write_text = write_text
        self.read_text = read_text


_CODECS = {}
_CLS_TO_TAG = {}


def _register(tag, cls, version, wb, rb, wt, rt):
    _CODECS[tag] = _Codec(tag, cls, version, wb, rb, wt, rt)
    _CLS_TO_TAG[cls] = tag


_register("linear_regression", LinearRegressionModel, 1,
          _linreg_write_binary, _linreg_read_binary,
          _linreg_write_text, _linreg_read_text)
_register("logistic_regression", LogisticRegressionModel, 1,
          _logreg_write_binary, _logreg_read_binary,
          _logreg_write_text, _logreg_read_text)
_register("kmeans", KMeansModel, 1,
          _kmeans_write_binary, _kmeans_read_binary,
          _kmeans_write_text, _kmeans_read_text)
_register("ffn", FFNModel, 1,
          _ffn_write_binary, _ffn_read_binary,
          _ffn_write_text, _ffn_read_text)


def registered_types():
    return sorted(_CODECS)


def type_tag_for(model):
    try:
        return _CLS_TO_TAG[type(model)]
    except KeyError:
        raise ValidationError(
            f"{type(model).__name__} is not a registered model type"
        ) from None


def model_to_bytes(model, format=FORMAT_BINARY):
    """Serialize a registered model into envelope bytes."""
    if format not in _FORMAT_BYTE:
        raise ValidationError(f"unknown format {format!r}")
    tag = type_tag_for(model)
    codec = _CODECS[tag]
    w = _Writer()
    w.raw(MAGIC)
    w.u8(_FORMAT_BYTE[format])
    encoded = tag.encode("ascii")
    w.u64(len(encoded))
    w.raw(encoded)
    w.u32(codec.version)
    if format == FORMAT_BINARY:
        codec.write_binary(model, w)
    else:
        lines = []
        codec.write_text(model, lines)
        w.raw("".join(line + "\n" for line in lines).encode("utf-8"))
    return w.getvalue()


def model_from_bytes(data):
    """Parse envelope bytes into (type_tag, model)."""
    if len(data) < 4 or data[:4] != MAGIC:
        raise NotAModelFileError("not a model file")
    r = _Reader(data, offset=4)
    fmt_byte = r.u8("format byte")
    fmt = {v: k for k, v in _FORMAT_BYTE.items()}.get(fmt_byte)
    if fmt is None:
        raise CorruptModelFileError(
            f"corrupt model file: unknown format byte {fmt_byte:#x} at "
            f"byte 4", offset=4
        )
    tag_len = r.u64("type tag length")
    try:
        tag = r.take(tag_len, "type tag").decode("ascii")
    except UnicodeDecodeError:
        raise CorruptModelFileError(
            "corrupt model file: type tag is not ASCII", offset=r.pos
        ) from None
    if tag not in _CODECS:
        raise UnknownModelTypeError(f"unknown model type {tag!r}")
    codec = _CODECS[tag]
    version = r.u32("version")
    if version > codec.version:
        raise NewerVersionError(
            f"file from a newer version: {tag} version {version} > "
            f"{codec.version}"
        )
    if fmt == FORMAT_BINARY:
        model = codec.read_binary(r, version)
        r.expect_end()
    else:
        tr = _TextReader(data[r.pos:], r.pos)
        model = codec.read_text(tr, version)
        tr.expect_end()
    return tag, model


def save_model(model, sink, format=FORMAT_BINARY):
    """Write a model envelope to a path or binary file object."""
    data = model_to_bytes(model, format)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)


def load_model(source):
    """Read (type_tag, model) from a path, bytes, or binary file object."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    return model_from_bytes(data)


def models_equal(a, b):
    """Field-wise bit equality of two registered models of the same type."""
    if type(a) is not type(b):
        return False
    if isinstance(a, LinearRegressionModel):
        return (a.lambda_ == b.lambda_
                and np.array_equal(a.weights, b.weights))
    if isinstance(a, LogisticRegressionModel):
        return (a.lambda_ == b.lambda_
                and a.decision_threshold == b.decision_threshold
                and np.array_equal(a.weights, b.weights))
    if isinstance(a, KMeansModel):
        return np.array_equal(a.centroids, b.centroids)
    if isinstance(a, FFNModel):
        if a.input_dim != b.input_dim or len(a.layers) != len(b.layers):
            return False
        for la, lb in zip(a.layers, b.layers):
            if type(la) is not type(lb):
                return False
            if isinstance(la, LinearLayer):
                if not (np.array_equal(la.W, lb.W)
                        and np.array_equal(la.b, lb.b)):
                    return False
        return True
    raise ValidationError(
        f"{type(a).__name__} is not a registered model type"
    )
