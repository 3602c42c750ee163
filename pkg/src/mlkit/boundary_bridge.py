"""Line-delimited JSON bridge exposing the boundary layer over stdio.

Foreign runtimes that cannot load Python in-process (the TypeScript shim,
for one) spawn ``python -m mlkit.boundary_bridge`` and speak one JSON
object per line: requests carry ``{"id", "op", ...}``, responses echo the
id plus ``status`` and any values.  Float buffers travel as base64 of the
little-endian f64 bytes, so matrices cross losslessly bit-for-bit.
"""

from __future__ import annotations

import base64
import json
import sys

from . import boundary as b

__all__ = ["main", "serve"]


def _b64(data):
    return base64.b64encode(data).decode("ascii")


def _unb64(text):
    return base64.b64decode(text)


def _handle(req):
    op = req["op"]
    if op == "pack_create":
        return {"status": b.STATUS_OK, "handle": b.pack_create()}
    if op == "pack_destroy":
        return {"status": b.pack_destroy(req["handle"])}
    if op == "pack_set_int":
        return {"status": b.pack_set_int(req["handle"], req["name"],
                                         int(req["value"]))}
    if op == "pack_set_double":
        return {"status": b.pack_set_double(req["handle"], req["name"],
                                            float(req["value"]))}
    if op == "pack_set_string":
        return {"status": b.pack_set_string(req["handle"], req["name"],
                                            req["value"])}
    if op == "pack_set_flag":
        return {"status": b.pack_set_flag(req["handle"], req["name"],
                                          bool(req["value"]))}
    if op == "pack_set_double_vector":
        return {"status": b.pack_set_double_vector(
            req["handle"], req["name"], _unb64(req["data"]))}
    if op == "pack_set_matrix":
        return {"status": b.pack_set_matrix(
            req["handle"], req["name"], req["rows"], req["cols"],
            _unb64(req["data"]))}
    if op == "pack_set_model_bytes":
        return {"status": b.pack_set_model_bytes(
            req["handle"], req["name"], _unb64(req["data"]))}
    if op == "pack_set_model_ref":
        return {"status": b.pack_set_model_ref(
            req["handle"], req["name"], req["model_handle"])}
    if op == "pack_get_int":
        status, value = b.pack_get_int(req["handle"], req["name"])
        return {"status": status, "value": value}
    if op == "pack_get_double":
        status, value = b.pack_get_double(req["handle"], req["name"])
        return {"status": status, "value": value}
    if op == "pack_get_string":
        status, value = b.pack_get_string(req["handle"], req["name"])
        return {"status": status, "value": value}
    if op == "pack_get_flag":
        status, value = b.pack_get_flag(req["handle"], req["name"])
        return {"status": status, "value": value}
    if op == "pack_get_double_vector":
        status, data = b.pack_get_double_vector(req["handle"], req["name"])
        return {"status": status, "data": _b64(data)}
    if op == "pack_get_matrix_dims":
        status, rows, cols = b.pack_get_matrix_dims(req["handle"],
                                                    req["name"])
        return {"status": status, "rows": rows, "cols": cols}
    if op == "pack_copy_matrix":
        status, data = b.pack_copy_matrix(req["handle"], req["name"])
        return {"status": status, "data": _b64(data)}
    if op == "pack_get_model_bytes":
        status, data = b.pack_get_model_bytes(req["handle"], req["name"])
        return {"status": status, "data": _b64(data)}
    if op == "pack_get_model_ref":
        status, mh, tag = b.pack_get_model_ref(req["handle"], req["name"])
        return {"status": status, "model_handle": mh, "type_tag": tag}
    if op == "pack_has":
        status, present = b.pack_has(req["handle"], req["name"])
        return {"status": status, "present": present}
    if op == "pack_run":
        return {"status": b.pack_run(req["handle"], req["method"])}
    if op == "pack_last_error":
        return {"status": b.STATUS_OK,
                "message": b.pack_last_error(req["handle"])}
    if op == "model_from_bytes":
        status, mh = b.model_from_bytes_handle(_unb64(req["data"]))
        return {"status": status, "model_handle": mh,
                "message": b.boundary_last_error() if status else ""}
    if op == "model_to_bytes":
        status, data = b.model_to_bytes_handle(
            req["model_handle"], req.get("format", "binary"))
        return {"status": status, "data": _b64(data),
                "message": b.boundary_last_error() if status else ""}
    if op == "model_free":
        return {"status": b.model_free(req["model_handle"])}
    if op == "boundary_version":
        return {"status": b.STATUS_OK, "version": b.boundary_version()}
    if op == "shutdown":
        return {"status": b.STATUS_OK, "shutdown": True}
    return {"status": b.STATUS_ERROR, "message": f"unknown op {op!r}"}


def serve(stdin=None, stdout=None):
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            resp = _handle(req)
        except Exception as exc:  # protocol-level failure, not a run error
            resp = {"status": b.STATUS_ERROR, "message": str(exc)}
            req = req if isinstance(req, dict) else {}
        resp["id"] = req.get("id")
        stdout.write(json.dumps(resp) + "\n")
        stdout.flush()
        if resp.get("shutdown"):
            break


def main():
    serve()
    return 0


if __name__ == "__main__":
    sys.exit(main())
