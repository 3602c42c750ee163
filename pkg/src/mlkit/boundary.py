"""Flat foreign-callable boundary over the method registry.

Everything here works with opaque integer handles, primitive scalars,
byte strings, and flat little-endian float64 buffers, so it can be
mirrored through any transport a foreign runtime can reach (the bundled
stdio bridge in ``mlkit.boundary_bridge``, for instance).  Matrices are
copied at the boundary in both directions; callers keep their buffers.

Status codes (stable):

    0  ok
    1  other error (e.g. malformed model bytes)
    2  invalid handle
    3  type mismatch or no value under that name
    4  method run failure

Getters return ``(status, value...)`` tuples, the in-process analogue of
C out-parameters.  After any nonzero status tied to a pack handle,
``pack_last_error`` returns the message; pack-less calls record theirs
for ``boundary_last_error``.
"""

from __future__ import annotations

import itertools
import threading

import numpy as np

from .bindings import ParamPack, run_method
from .errors import MlkitError
from .methods import REGISTRY
from .model_io import model_from_bytes, model_to_bytes, type_tag_for

__all__ = [
    "BOUNDARY_VERSION",
    "STATUS_BAD_HANDLE",
    "STATUS_ERROR",
    "STATUS_OK",
    "STATUS_RUN_FAILURE",
    "STATUS_TYPE_MISMATCH",
    "boundary_last_error",
    "boundary_version",
    "model_free",
    "model_from_bytes_handle",
    "model_to_bytes_handle",
    "pack_copy_matrix",
    "pack_create",
    "pack_destroy",
    "pack_get_double",
    "pack_get_double_vector",
    "pack_get_flag",
    "pack_get_int",
    "pack_get_matrix_dims",
    "pack_get_model_bytes",
    "pack_get_model_ref",
    "pack_get_string",
    "pack_has",
    "pack_last_error",
    "pack_run",
    "pack_set_double",
    "pack_set_double_vector",
    "pack_set_flag",
    "pack_set_int",
    "pack_set_matrix",
    "pack_set_model_bytes",
    "pack_set_model_ref",
    "pack_set_string",
]

BOUNDARY_VERSION = 1

STATUS_OK = 0
STATUS_ERROR = 1
STATUS_BAD_HANDLE = 2
STATUS_TYPE_MISMATCH = 3
STATUS_RUN_FAILURE = 4

_lock = threading.Lock()
_packs = {}
_models = {}
_next_pack = itertools.count(1)
_next_model = itertools.count(1)
_packless_error = ""


def boundary_version():
    return BOUNDARY_VERSION


def boundary_last_error():
    """Last error message from a call that had no pack handle."""
    return _packless_error


def _set_packless(msg):
    global _packless_error
    _packless_error = msg


def pack_create():
    with _lock:
        handle = next(_next_pack)
        _packs[handle] = ParamPack()
    return handle


def pack_destroy(handle):
    with _lock:
        if _packs.pop(handle, None) is None:
            return STATUS_BAD_HANDLE
    return STATUS_OK


def _pack(handle):
    with _lock:
        return _packs.get(handle)


def pack_last_error(handle):
    pack = _pack(handle)
    if pack is None or pack.error is None:
        return ""
    return pack.error


def _fail(pack, status, message):
    pack.error = message
    return status


def _set(handle, name, convert):
    pack = _pack(handle)
    if pack is None:
        return STATUS_BAD_HANDLE
    try:
        pack.set(str(name), convert())
    except (MlkitError, TypeError, ValueError) as exc:
        return _fail(pack, STATUS_TYPE_MISMATCH,
                     f"param {name!r}: {exc}")
    return STATUS_OK


def pack_set_int(handle, name, value):
    def convert():
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise TypeError(f"expected int, got {type(value).__name__}")
        return int(value)
    return _set(handle, name, convert)


def pack_set_double(handle, name, value):
    def convert():
        if isinstance(value, bool) or not isinstance(
                value, (int, float, np.integer, np.floating)):
            raise TypeError(f"expected double, got {type(value).__name__}")
        return float(value)
    return _set(handle, name, convert)


def pack_set_string(handle, name, value):
    def convert():
        if isinstance(value, bytes):
            return value.decode("utf-8")
        if not isinstance(value, str):
            raise TypeError(f"expected string, got {type(value).__name__}")
        return value
    return _set(handle, name, convert)


def pack_set_flag(handle, name, value):
    def convert():
        if not isinstance(value, (bool, np.bool_)):
            raise TypeError(f"expected flag, got {type(value).__name__}")
        return bool(value)
    return _set(handle, name, convert)


def _buffer_to_array(data, count, what):
    if isinstance(data, (bytes, bytearray, memoryview)):
        arr = np.frombuffer(data, dtype="<f8").astype(np.float64)
    else:
        arr = np.ascontiguousarray(data, dtype=np.float64).reshape(-1)
    if count is not None and arr.shape[0] != count:
        raise ValueError(
            f"{what}: expected {count} values, got {arr.shape[0]}"
        )
    return arr.copy()


def pack_set_double_vector(handle, name, data):
    def convert():
        return _buffer_to_array(data, None, name)
    return _set(handle, name, convert)


def pack_set_matrix(handle, name, rows, cols, data):
    def convert():
        if rows < 0 or cols < 0:
            raise ValueError(f"bad shape {rows}x{cols}")
        arr = _buffer_to_array(data, rows * cols, name)
        return arr.reshape(int(rows), int(cols))
    return _set(handle, name, convert)


def pack_set_model_bytes(handle, name, data):
    def convert():
        _, model = model_from_bytes(bytes(data))
        return model
    return _set(handle, name, convert)


def pack_set_model_ref(handle, name, model_handle):
    pack = _pack(handle)
    if pack is None:
        return STATUS_BAD_HANDLE
    with _lock:
        model = _models.get(model_handle)
    if model is None:
        return _fail(pack, STATUS_BAD_HANDLE,
                     f"invalid model handle {model_handle}")
    pack.set(str(name), model)
    return STATUS_OK


def _get(handle, name, extract, default):
    pack = _pack(handle)
    if pack is None:
        return (STATUS_BAD_HANDLE,) + default
    if not pack.has(str(name)):
        status = _fail(pack, STATUS_TYPE_MISMATCH,
                       f"no value named {name!r}")
        return (status,) + default
    try:
        return (STATUS_OK,) + extract(pack.get(str(name)))
    except (MlkitError, TypeError, ValueError) as exc:
        status = _fail(pack, STATUS_TYPE_MISMATCH,
                       f"param {name!r}: {exc}")
        return (status,) + default


def pack_get_int(handle, name):
    def extract(v):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise TypeError(f"stored value is {type(v).__name__}, not int")
        return (int(v),)
    return _get(handle, name, extract, (0,))


def pack_get_double(handle, name):
    def extract(v):
        if isinstance(v, bool) or not isinstance(
                v, (int, float, np.integer, np.floating)):
            raise TypeError(f"stored value is {type(v).__name__}, not double")
        return (float(v),)
    return _get(handle, name, extract, (0.0,))


def pack_get_string(handle, name):
    def extract(v):
        if not isinstance(v, str):
            raise TypeError(f"stored value is {type(v).__name__}, not string")
        return (v,)
    return _get(handle, name, extract, ("",))


def pack_get_flag(handle, name):
    def extract(v):
        if not isinstance(v, (bool, np.bool_)):
            raise TypeError(f"stored value is {type(v).__name__}, not flag")
        return (bool(v),)
    return _get(handle, name, extract, (False,))


def pack_get_double_vector(handle, name):
    """(status, little-endian f64 bytes) copy of a stored vector."""
    def extract(v):
        arr = np.ascontiguousarray(v, dtype="<f8")
        if arr.ndim != 1:
            raise TypeError(f"stored value has ndim {arr.ndim}, not 1")
        return (arr.tobytes(),)
    return _get(handle, name, extract, (b"",))


def pack_get_matrix_dims(handle, name):
    def extract(v):
        if not (isinstance(v, np.ndarray) and v.ndim == 2):
            raise TypeError("stored value is not a matrix")
        return (int(v.shape[0]), int(v.shape[1]))
    return _get(handle, name, extract, (0, 0))


def pack_copy_matrix(handle, name):
    """(status, little-endian f64 bytes) row-major copy of a stored matrix."""
    def extract(v):
        if not (isinstance(v, np.ndarray) and v.ndim == 2):
            raise TypeError("stored value is not a matrix")
        return (np.ascontiguousarray(v, dtype="<f8").tobytes(),)
    return _get(handle, name, extract, (b"",))


def pack_get_model_bytes(handle, name, format="binary"):
    def extract(v):
        return (model_to_bytes(v, format),)
    return _get(handle, name, extract, (b"",))


def pack_get_model_ref(handle, name):
    """(status, model handle, type tag) registering the stored model."""
    def extract(v):
        tag = type_tag_for(v)
        with _lock:
            mh = next(_next_model)
            _models[mh] = v
        return (mh, tag)
    return _get(handle, name, extract, (0, ""))


def pack_has(handle, name):
    pack = _pack(handle)
    if pack is None:
        return STATUS_BAD_HANDLE, False
    return STATUS_OK, pack.has(str(name))


def pack_run(handle, method):
    pack = _pack(handle)
    if pack is None:
        return STATUS_BAD_HANDLE
    try:
        run_method(REGISTRY, str(method), pack)
    except MlkitError as exc:
        pack.error = str(exc)
        return STATUS_RUN_FAILURE
    return STATUS_OK


def model_from_bytes_handle(data):
    """(status, model handle) for envelope bytes loaded in-process."""
    try:
        _, model = model_from_bytes(bytes(data))
    except MlkitError as exc:
        _set_packless(str(exc))
        return STATUS_ERROR, 0
    with _lock:
        mh = next(_next_model)
        _models[mh] = model
    return STATUS_OK, mh


def model_to_bytes_handle(model_handle, format="binary"):
    with _lock:
        model = _models.get(model_handle)
    if model is None:
        _set_packless(f"invalid model handle {model_handle}")
        return STATUS_BAD_HANDLE, b""
    try:
        return STATUS_OK, model_to_bytes(model, format)
    except MlkitError as exc:
        _set_packless(str(exc))
        return STATUS_ERROR, b""


def model_free(model_handle):
    with _lock:
        if _models.pop(model_handle, None) is None:
            return STATUS_BAD_HANDLE
    return STATUS_OK
