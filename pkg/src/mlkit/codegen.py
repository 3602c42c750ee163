"""Foreign-wrapper source generation from the method registry.

One backend ships (TypeScript, consumed by the ``frontend/`` package);
additional target ecosystems plug in through ``register_backend``.
Generation is a pure function of the registry: regenerating without
registry changes is byte-identical, which the tests assert.

Emitted layout per backend: one source file per method plus an index,
importing one shared hand-written runtime-support module.
"""

from __future__ import annotations

import json
import os

from .bindings import generate_help
from .errors import ValidationError
from .methods import REGISTRY

__all__ = [
    "BACKENDS",
    "TypeScriptBackend",
    "generate_foreign_wrapper",
    "register_backend",
    "registry_dump",
    "write_wrapper_tree",
]


def _ts_string(value):
    return json.dumps(value)


def _ts_default(param):
    if param.type_tag == "string":
        return _ts_string(param.default)
    if param.type_tag == "double":
        return repr(float(param.default))
    if param.type_tag == "flag":
        return "true" if param.default else "false"
    return repr(param.default)


_TS_INPUT_TYPE = {
    "matrix": "MatrixInput",
    "double_vector": "VectorInput",
    "int": "number",
    "double": "number",
    "string": "string",
    "flag": "boolean",
}
_TS_OUTPUT_TYPE = {
    "matrix": "Matrix",
    "double_vector": "Float64Array",
    "int": "number",
    "double": "number",
    "string": "string",
    "flag": "boolean",
}
_TS_SET = {
    "matrix": "packSetMatrix",
    "double_vector": "packSetDoubleVector",
    "int": "packSetInt",
    "double": "packSetDouble",
    "string": "packSetString",
    "flag": "packSetFlag",
}
_TS_GET = {
    "matrix": "packGetMatrix",
    "double_vector": "packGetDoubleVector",
    "int": "packGetInt",
    "double": "packGetDouble",
    "string": "packGetString",
    "flag": "packGetFlag",
}


def _ts_type(param):
    table = _TS_INPUT_TYPE if param.direction == "input" else _TS_OUTPUT_TYPE
    if param.type_tag.startswith("model:"):
        return "ModelHandle"
    return table[param.type_tag]


def _camel(name):
    head, *rest = name.split("_")
    return head + "".join(part.capitalize() for part in rest)


class TypeScriptBackend:
    """Emits async TypeScript wrappers over the runtime-support module."""

    name = "typescript"
    runtime_module = "../runtime.js"  # NodeNext ESM wants explicit extensions

    def file_name(self, method_name):
        return f"{method_name}.ts"

    def index_file_name(self):
        return "index.ts"

    def emit_method(self, spec, help_text):
        iface = _camel(spec.name).capitalize()
        lines = [
            "// GENERATED by the mlkit binding generator. Do not edit.",
            "",
            "import {",
            "  Matrix,",
            "  MatrixInput,",
            "  ModelHandle,",
            "  Runtime,",
            "  VectorInput,",
            "  defaultRuntime,",
            f"}} from \"{self.runtime_module}\";",
            "",
        ]

        lines.append(f"export interface {iface}Inputs {{")
        for p in spec.inputs():
            doc = p.doc
            if p.default is not None:
                doc += f" (default: {p.default})"
            lines.append(f"  /** {_escape_comment(doc)} */")
            opt = "" if p.required else "?"
            lines.append(f"  {p.name}{opt}: {_ts_type(p)};")
        lines.append("}")
        lines.append("")

        lines.append(f"export interface {iface}Outputs {{")
        for p in spec.outputs():
            lines.append(f"  /** {_escape_comment(p.doc)} */")
            lines.append(f"  {p.name}?: {_ts_type(p)};")
        lines.append("}")
        lines.append("")

        lines.append("/**")
        for help_line in help_text.rstrip("\n").split("\n"):
            lines.append(f" * {_escape_comment(help_line)}".rstrip())
        lines.append(" */")
        lines.append(
            f"export async function {_camel(spec.name)}("
            f"args: {iface}Inputs, runtime?: Runtime): "
            f"Promise<{iface}Outputs> {{"
        )
        lines.append("  const rt = runtime ?? defaultRuntime();")
        lines.append("  const pack = await rt.packCreate();")
        lines.append("  try {")
        for p in spec.inputs():
            if p.type_tag.startswith("model:"):
                setter = "packSetModelRef"
            else:
                setter = _TS_SET[p.type_tag]
            call = f"await rt.{setter}(pack, {_ts_string(p.name)}, "
            if p.required:
                lines.append(f"    {call}args.{p.name});")
            elif p.default is not None:
                lines.append(
                    f"    {call}args.{p.name} ?? {_ts_default(p)});"
                )
            else:
                lines.append(f"    if (args.{p.name} !== undefined) {{")
                lines.append(f"      {call}args.{p.name});")
                lines.append("    }")
        lines.append(
            f"    await rt.packRun(pack, {_ts_string(spec.name)});"
        )
        lines.append(f"    const outputs: {iface}Outputs = {{}};")
        for p in spec.outputs():
            if p.type_tag.startswith("model:"):
                getter = "packGetModel"
            else:
                getter = _TS_GET[p.type_tag]
            lines.append(
                f"    if (await rt.packHas(pack, {_ts_string(p.name)})) {{"
            )
            lines.append(
                f"      outputs.{p.name} = await rt.{getter}(pack, "
                f"{_ts_string(p.name)});"
            )
            lines.append("    }")
        lines.append("    return outputs;")
        lines.append("  } finally {")
        lines.append("    await rt.packDestroy(pack);")
        lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def emit_index(self, method_names):
        lines = ["// GENERATED by the mlkit binding generator. Do not edit.",
                 ""]
        for name in method_names:
            lines.append(
                f"export {{ {_camel(name)} }} from \"./{name}.js\";"
            )
        return "\n".join(lines) + "\n"


def _escape_comment(text):
    return text.replace("*/", "*\\/")


BACKENDS = {}


def register_backend(backend):
    if backend.name in BACKENDS:
        raise ValidationError(f"duplicate backend {backend.name!r}")
    BACKENDS[backend.name] = backend


register_backend(TypeScriptBackend())


def _backend(name):
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValidationError(
            f"unknown backend {name!r}; expected one of {sorted(BACKENDS)}"
        ) from None


def generate_foreign_wrapper(name, backend="typescript", registry=REGISTRY):
    """Wrapper source text for one method in the target ecosystem."""
    spec = registry.get(name)
    return _backend(backend).emit_method(spec,
                                         generate_help(registry, name))


def write_wrapper_tree(out_dir, backend="typescript", registry=REGISTRY):
    """Write per-method wrapper files plus the index; returns the paths."""
    be = _backend(backend)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name in registry.names():
        path = os.path.join(out_dir, be.file_name(name))
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(generate_foreign_wrapper(name, backend, registry))
        written.append(path)
    index = os.path.join(out_dir, be.index_file_name())
    with open(index, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(be.emit_index(registry.names()))
    written.append(index)
    return written


def registry_dump(registry=REGISTRY):
    """Machine-readable registry description (for generator audits)."""
    methods = {}
    for name in registry.names():
        spec = registry.get(name)
        methods[name] = {
            "summary": spec.summary,
            "params": [
                {
                    "name": p.name,
                    "direction": p.direction,
                    "type": p.type_tag,
                    "required": p.required,
                    "default": p.default,
                    "doc": p.doc,
                }
                for p in spec.params
            ],
        }
    return methods


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(
        description="Generate foreign wrapper sources from the registry."
    )
    parser.add_argument("--backend", default="typescript")
    parser.add_argument("--out", help="output directory for wrapper sources")
    parser.add_argument("--dump-registry", action="store_true",
                        help="print the registry as JSON and exit")
    args = parser.parse_args(argv)
    if args.dump_registry:
        print(json.dumps(registry_dump(), indent=2, sort_keys=True))
        return 0
    if not args.out:
        parser.error("--out is required unless --dump-registry is given")
    for path in write_wrapper_tree(args.out, args.backend):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
