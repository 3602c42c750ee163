"""Declarative method registry and the per-call parameter pack.

Every surface (direct calls, CLI, boundary layer, generated foreign
wrappers) is driven by the same ``MethodSpec`` records.  A ``ParamPack``
carries one invocation's named inputs in and outputs back; nothing is
ever global, so distinct packs can run fully in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, as_vector
from .errors import (
    MissingParameterError,
    MlkitError,
    ParamTypeError,
    RegistrationError,
    UnknownMethodError,
)

__all__ = [
    "MethodSpec",
    "ParamPack",
    "ParamSpec",
    "Registry",
    "SCALAR_TYPE_TAGS",
    "coerce_value",
    "generate_help",
    "run_method",
]

SCALAR_TYPE_TAGS = ("int", "double", "string", "flag")
_BASE_TYPE_TAGS = SCALAR_TYPE_TAGS + ("matrix", "double_vector")


def _valid_type_tag(tag):
    return tag in _BASE_TYPE_TAGS or tag.startswith("model:")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    direction: str          # "input" | "output"
    type_tag: str
    required: bool = False
    default: object = None
    doc: str = ""

    def __post_init__(self):
        if self.direction not in ("input", "output"):
            raise RegistrationError(
                f"param {self.name!r}: bad direction {self.direction!r}"
            )
        if not _valid_type_tag(self.type_tag):
            raise RegistrationError(
                f"param {self.name!r}: bad type tag {self.type_tag!r}"
            )
        if self.required and self.default is not None:
            raise RegistrationError(
                f"param {self.name!r}: required params take no default"
            )
        if self.direction == "output" and (self.required
                                           or self.default is not None):
            raise RegistrationError(
                f"param {self.name!r}: outputs are never required or defaulted"
            )


@dataclass(frozen=True)
class MethodSpec:
    name: str
    summary: str
    detail: str
    params: tuple
    run: object  # callable(dict of inputs) -> dict of outputs

    def __post_init__(self):
        seen = set()
        for p in self.params:
            if p.name in seen:
                raise RegistrationError(
                    f"method {self.name!r}: duplicate param {p.name!r}"
                )
            seen.add(p.name)
        if not any(p.direction == "output" for p in self.params):
            raise RegistrationError(
                f"method {self.name!r}: needs at least one output param"
            )

    def inputs(self):
        return [p for p in self.params if p.direction == "input"]

    def outputs(self):
        return [p for p in self.params if p.direction == "output"]

    def param(self, name):
        for p in self.params:
            if p.name == name:
                return p
        return None


class ParamPack:
    """Per-invocation name -> value container with an error slot."""

    def __init__(self):
        self._values = {}
        self.error = None

    def set(self, name, value):
        self._values[name] = value

    def get(self, name):
        return self._values[name]

    def has(self, name):
        return name in self._values

    def names(self):
        return list(self._values)


class Registry:
    """Write-once method table; immutable after ``freeze()``."""

    def __init__(self):
        self._methods = {}
        self._frozen = False

    def register(self, spec):
        if self._frozen:
            raise RegistrationError(
                "registry is frozen; methods register at startup only"
            )
        if spec.name in self._methods:
            raise RegistrationError(f"duplicate method name {spec.name!r}")
        self._methods[spec.name] = spec

    def freeze(self):
        self._frozen = True

    @property
    def frozen(self):
        return self._frozen

    def get(self, name):
        try:
            return self._methods[name]
        except KeyError:
            raise UnknownMethodError(f"unknown method {name!r}") from None

    def names(self):
        return list(self._methods)

    def __contains__(self, name):
        return name in self._methods


def _type_name(value):
    if isinstance(value, np.ndarray):
        return f"ndarray(ndim={value.ndim})"
    return type(value).__name__


def coerce_value(spec, value, model_tag_for=None):
    """Check/convert ``value`` against a ParamSpec; raise ParamTypeError."""
    tag = spec.type_tag
    try:
        if tag == "matrix":
            return as_matrix(value, spec.name)
        if tag == "double_vector":
            return as_vector(value, spec.name)
        if tag == "int":
            if isinstance(value, bool) or not isinstance(
                    value, (int, np.integer)):
                raise TypeError
            return int(value)
        if tag == "double":
            if isinstance(value, bool) or not isinstance(
                    value, (int, float, np.integer, np.floating)):
                raise TypeError
            return float(value)
        if tag == "string":
            if not isinstance(value, str):
                raise TypeError
            return value
        if tag == "flag":
            if not isinstance(value, (bool, np.bool_)):
                raise TypeError
            return bool(value)
        # model:<tag>
        want = tag.split(":", 1)[1]
        got = model_tag_for(value) if model_tag_for else None
        if got != want:
            raise TypeError
        return value
    except (TypeError, ValueError, MlkitError):
        raise ParamTypeError(
            f"param {spec.name!r}: expected {tag}, got {_type_name(value)}"
        ) from None


def run_method(registry, name, pack):
    """Validate inputs from the pack, run the method, store its outputs.

    Inputs are left untouched; on failure the pack's error slot records
    the message and the exception propagates.
    """
    from .model_io import type_tag_for  # local to avoid an import cycle

    def tag_of(model):
        try:
            return type_tag_for(model)
        except MlkitError:
            return None

    try:
        spec = registry.get(name)
        inputs = {}
        for p in spec.inputs():
            if pack.has(p.name):
                inputs[p.name] = coerce_value(p, pack.get(p.name), tag_of)
            elif p.required:
                raise MissingParameterError(
                    f"missing required parameter {p.name!r}"
                )
            elif p.default is not None:
                inputs[p.name] = coerce_value(p, p.default, tag_of)
        outputs = spec.run(inputs)
        for p in spec.outputs():
            if p.name in outputs:
                pack.set(p.name, coerce_value(p, outputs[p.name], tag_of))
    except MlkitError as exc:
        pack.error = str(exc)
        raise
    return pack


def generate_help(registry, name):
    """Deterministic help text for one method, params in declaration order."""
    spec = registry.get(name)
    lines = [f"{spec.name}: {spec.summary}", ""]
    if spec.detail:
        lines.append(spec.detail)
        lines.append("")
    lines.append("Input parameters:")
    for p in spec.inputs():
        extra = "required" if p.required else (
            f"default: {p.default}" if p.default is not None else "optional")
        lines.append(f"  --{p.name} ({p.type_tag}, {extra}): {p.doc}")
    lines.append("")
    lines.append("Output parameters:")
    for p in spec.outputs():
        lines.append(f"  --{p.name} ({p.type_tag}): {p.doc}")
    return "\n".join(lines) + "\n"
