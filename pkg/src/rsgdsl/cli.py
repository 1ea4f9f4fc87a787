"""Command-line front end: check, gen, run and viz.

Exit status is 0 on success, 1 for model or execution errors and 2 for I/O
or usage errors. Diagnostics go to stderr; summaries go to stdout.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from rsgdsl.codegen import (
    BACKENDS,
    CodegenError,
    emit_dot,
    emit_setup_program,
    load_setup_program,
    order_primitives,
    write_block_stub,
    write_setup_program,
)
from rsgdsl.diagnostics import Diagnostic
from rsgdsl.frontend import check_source
from rsgdsl.runtime.blocks import BlockExecutionError, execute_function_block, instantiate_block
from rsgdsl.runtime.segmentation import default_registry
from rsgdsl.runtime.world import WorldModel
from rsgdsl.sem.patterns import check_block_compatibility
from rsgdsl.sem.validate import ValidatedModel
from rsgdsl.units import Dimension, Quantity, UnknownUnitError, lookup_unit, to_nanoseconds

EXIT_OK = 0
EXIT_MODEL = 1
EXIT_IO = 2

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]+)\s*$")


class UsageError(Exception):
    pass


def parse_time(text: str) -> int:
    """Parse a time quantity such as ``1.5 s`` or ``200ms`` into nanoseconds."""
    m = _QUANTITY.match(text)
    if not m:
        raise UsageError(f"cannot parse time quantity {text!r}")
    try:
        unit = lookup_unit(m.group(2))
    except UnknownUnitError as exc:
        raise UsageError(str(exc)) from None
    if unit.dimension is not Dimension.TIME:
        raise UsageError(f"{text!r} is not a time quantity")
    return to_nanoseconds(Quantity.of(float(m.group(1)), unit.symbol))


def _report(diags: Sequence[Diagnostic], filename: str) -> None:
    for d in diags:
        print(d.format(filename), file=sys.stderr)


def _load(path: Path) -> tuple[ValidatedModel | None, list[Diagnostic]]:
    """Read and check a model; raises OSError on I/O problems."""
    vm, diags = check_source(path.read_text(encoding="utf-8"))
    if vm is not None:
        diags = diags + order_primitives(vm).warnings
    _report(diags, str(path))
    return vm, diags


def compatibility_table(vm: ValidatedModel) -> list[str]:
    blocks = vm.model.blocks()
    if not blocks:
        return ["no function blocks declared"]
    lines = []
    for producer in blocks:
        for consumer in blocks:
            verdict = check_block_compatibility(producer, consumer, vm)
            mark = "compatible" if verdict else f"incompatible: {verdict.explanation}"
            lines.append(f"{producer.name} -> {consumer.name}: {mark}")
    return lines


def cmd_check(args: argparse.Namespace) -> int:
    vm, diags = _load(Path(args.file))
    if vm is None:
        errors = sum(d.is_error for d in diags)
        print(f"{args.file}: {errors} error(s)")
        return EXIT_MODEL
    warnings = len(diags)
    print(f"{args.file}: ok, {len(vm.model.node_decls())} node declarations, {warnings} warning(s)")
    for line in compatibility_table(vm):
        print(line)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if args.backend not in BACKENDS:
        print(f"error: unknown backend {args.backend!r} [UNSUPPORTED_BACKEND]", file=sys.stderr)
        return EXIT_MODEL
    vm, _ = _load(path)
    if vm is None:
        return EXIT_MODEL
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    program = emit_setup_program(vm, path.stem)
    written = [write_setup_program(program, out)]
    for block in vm.model.blocks():
        written.append(write_block_stub(block, vm, out, args.backend, path.stem))
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    path = Path(args.file)
    stamp = parse_time(args.at) if args.at is not None else 0
    vm, _ = _load(path)
    if vm is None:
        return EXIT_MODEL
    registry = default_registry()
    declared = {b.name for b in vm.model.blocks()}
    for name in args.exec:
        if name not in declared:
            print(f"error: block {name!r} is not declared in {path}", file=sys.stderr)
            return EXIT_MODEL
        if name not in registry:
            print(f"error: no body registered for block {name!r}", file=sys.stderr)
            return EXIT_MODEL

    world = WorldModel(vm.window_ns)
    names = load_setup_program(emit_setup_program(vm, path.stem), world)
    status = EXIT_OK
    for name in args.exec:
        block = instantiate_block(vm, name, registry.get(name), names)
        try:
            report = execute_function_block(world, block, stamp)
        except BlockExecutionError as exc:
            print(exc.report.summary())
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_MODEL
            break
        print(report.summary())

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    snapshot = out / f"{path.stem}.snapshot.json"
    dot = out / f"{path.stem}.dot"
    snapshot.write_text(world.snapshot_json(), encoding="utf-8")
    dot.write_text(emit_dot(world, path.stem), encoding="utf-8")
    print(f"wrote {snapshot}")
    print(f"wrote {dot}")
    return status


def cmd_viz(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if path.suffix == ".json":
        try:
            snapshot = json.loads(path.read_text(encoding="utf-8"))
            text = emit_dot(snapshot, path.stem.removesuffix(".snapshot"))
        except (ValueError, KeyError, TypeError) as exc:
            print(f"error: {path} is not a scene snapshot: {exc}", file=sys.stderr)
            return EXIT_MODEL
    else:
        vm, _ = _load(path)
        if vm is None:
            return EXIT_MODEL
        world = WorldModel(vm.window_ns)
        load_setup_program(emit_setup_program(vm, path.stem), world)
        text = emit_dot(world, path.stem)
    out = Path(args.output)
    out.write_text(text, encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsgdsl", description="Robot scene graph model toolchain.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="report diagnostics and block compatibility")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write the setup program and block interface stubs")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--backend", default="python", help=f"stub backend ({', '.join(sorted(BACKENDS))})")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="load the model, execute blocks, write snapshot and dot")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=".", help="output directory")
    p.add_argument("--exec", action="append", default=[], metavar="BLOCK", help="block to execute; repeatable")
    p.add_argument("--at", metavar="QUANTITY", help="execution stamp, e.g. '2 s'")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("viz", help="write a dot rendering of a model or snapshot")
    p.add_argument("file", help=".rsg model or snapshot .json")
    p.add_argument("-o", "--output", required=True, help="dot file to write")
    p.set_defaults(func=cmd_viz)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc} [IO_ERROR]", file=sys.stderr)
        return EXIT_IO
    except CodegenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
