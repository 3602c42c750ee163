"""Command-line front end: one subcommand per registered method.

The CLI holds no per-method code; it interprets the method registry at
runtime, so a newly registered method appears as a subcommand with flags
and help for free.  Exit codes partition cleanly: 0 success, 1 the method
ran (or its files loaded) and failed, 2 usage error before anything ran.
"""

from __future__ import annotations

import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .bindings import ParamPack, generate_help, run_method
from .core import as_vector, format_float, load_csv, save_csv
from .errors import MlkitError
from .methods import REGISTRY
from .model_io import FORMAT_BINARY, FORMAT_TEXT, load_model, save_model

__all__ = ["CliInvocation", "UsageError", "execute", "main", "parse_argv"]

GLOBAL_FLAGS = ("help", "verbose", "version", "text_model")


class UsageError(MlkitError):
    """Bad invocation; nothing was executed (exit code 2)."""


@dataclass
class CliInvocation:
    method: str | None = None
    flags: dict = field(default_factory=dict)  # param name -> raw string|True
    help: bool = False
    verbose: bool = False
    version: bool = False
    text_model: bool = False


def parse_argv(args, registry=REGISTRY):
    """First positional token is the method; flags are --name [value].

    Flag-typed params take no value; every other param flag consumes the
    next token (which must not itself start with ``--``).
    """
    inv = CliInvocation()
    spec = None
    i = 0
    while i < len(args):
        tok = args[i]
        if tok.startswith("--"):
            name = tok[2:]
            if name in GLOBAL_FLAGS:
                setattr(inv, name, True)
                i += 1
                continue
            if spec is None:
                raise UsageError(f"unknown flag --{name}")
            param = spec.param(name)
            if param is None:
                raise UsageError(
                    f"unknown flag --{name} for method {inv.method!r}"
                )
            if param.direction == "input" and param.type_tag == "flag":
                inv.flags[name] = True
                i += 1
                continue
            if i + 1 >= len(args) or args[i + 1].startswith("--"):
                raise UsageError(f"missing value after --{name}")
            inv.flags[name] = args[i + 1]
            i += 2
        else:
            if inv.method is not None:
                raise UsageError(f"unexpected positional argument {tok!r}")
            if tok not in registry:
                raise UsageError(f"unknown method {tok!r}")
            inv.method = tok
            spec = registry.get(tok)
            i += 1
    return inv


def _top_level_help(registry):
    lines = ["usage: mlkit <method> [--param value ...]", "", "Methods:"]
    for name in registry.names():
        lines.append(f"  {name:24s}{registry.get(name).summary}")
    lines.append("")
    lines.append("Run 'mlkit <method> --help' for method parameters.")
    return "\n".join(lines) + "\n"


def _parse_scalar(param, raw):
    try:
        if param.type_tag == "int":
            return int(raw)
        if param.type_tag == "double":
            return float(raw)
    except ValueError:
        raise UsageError(
            f"--{param.name}: cannot parse {raw!r} as {param.type_tag}"
        ) from None
    return raw


def _effective_seed(spec, inv):
    """MLKIT_SEED overrides the default seed when --seed is not given."""
    param = spec.param("seed")
    if param is None or param.direction != "input" or "seed" in inv.flags:
        return None
    raw = os.environ.get("MLKIT_SEED")
    if raw is None:
        return None
    try:
        seed = int(raw)
        if seed < 0:
            raise ValueError
    except ValueError:
        raise UsageError(
            f"MLKIT_SEED must be an unsigned integer, got {raw!r}"
        ) from None
    return seed


def execute(inv, registry=REGISTRY, stdout=None, stderr=None):
    """Run a parsed invocation; returns the process exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    if inv.version:
        print(f"mlkit {__version__}", file=stdout)
        return 0
    if inv.method is None:
        if inv.help:
            stdout.write(_top_level_help(registry))
            return 0
        stderr.write(_top_level_help(registry))
        return 2
    spec = registry.get(inv.method)
    if inv.help:
        stdout.write(generate_help(registry, inv.method))
        return 0

    # scalar conversion is still argument parsing: fail as usage errors
    try:
        scalars = {}
        for name, raw in inv.flags.items():
            param = spec.param(name)
            if param.direction == "input" and param.type_tag in (
                    "int", "double", "string"):
                scalars[name] = _parse_scalar(param, raw)
        seed = _effective_seed(spec, inv)
    except UsageError as exc:
        print(f"mlkit: error: {exc}", file=stderr)
        return 2

    timings = {}
    pack = ParamPack()
    try:
        t0 = time.perf_counter()
        for name, raw in inv.flags.items():
            param = spec.param(name)
            if param.direction != "input":
                continue
            if param.type_tag == "matrix":
                pack.set(name, load_csv(raw))
            elif param.type_tag == "double_vector":
                pack.set(name, as_vector(load_csv(raw), name))
            elif param.type_tag.startswith("model:"):
                tag, model = load_model(raw)
                want = param.type_tag.split(":", 1)[1]
                if tag != want:
                    raise MlkitError(
                        f"--{name}: model file holds {tag!r}, "
                        f"expected {want!r}"
                    )
                pack.set(name, model)
            elif param.type_tag == "flag":
                pack.set(name, True)
            else:
                pack.set(name, scalars[name])
        if seed is not None:
            pack.set("seed", seed)
        timings["load"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        run_method(registry, inv.method, pack)
        timings["run"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        model_format = FORMAT_TEXT if inv.text_model else FORMAT_BINARY
        for param in spec.outputs():
            if not pack.has(param.name):
                continue
            value = pack.get(param.name)
            if param.type_tag == "matrix":
                if param.name in inv.flags:
                    save_csv(value, inv.flags[param.name])
            elif param.type_tag == "double_vector":
                if param.name in inv.flags:
                    save_csv(value.reshape(-1, 1), inv.flags[param.name])
            elif param.type_tag.startswith("model:"):
                if param.name in inv.flags:
                    save_model(value, inv.flags[param.name], model_format)
            elif param.type_tag == "double":
                print(f"{param.name}={format_float(value)}", file=stdout)
            else:
                print(f"{param.name}={value}", file=stdout)
        timings["save"] = time.perf_counter() - t0
    except (MlkitError, OSError) as exc:
        print(f"mlkit {inv.method}: error: {exc}", file=stderr)
        return 1

    if inv.verbose:
        for phase in ("load", "run", "save"):
            print(f"[timing] {phase}: {timings[phase]:.6f}s", file=stderr)
    return 0


def main(argv=None, registry=REGISTRY):
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        inv = parse_argv(args, registry)
    except UsageError as exc:
        print(f"mlkit: error: {exc}", file=sys.stderr)
        return 2
    except MlkitError as exc:
        print(f"mlkit: error: {exc}", file=sys.stderr)
        return 2
    return execute(inv, registry)


if __name__ == "__main__":
    sys.exit(main())
