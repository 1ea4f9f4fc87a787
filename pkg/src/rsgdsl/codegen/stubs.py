"""Function-block interface stubs.

Each block gets one generated interface file per backend. Implementations
subclass (Python) or derive from (C++) the interface in hand-written code,
so regenerating never touches user code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from rsgdsl.codegen.setup import CodegenError
from rsgdsl.kinds import Cardinality
from rsgdsl.sem.patterns import StructurePattern, to_pattern
from rsgdsl.sem.validate import ValidatedModel
from rsgdsl.syntax.nodes import (
    FunctionBlockDecl,
    GeometricNodeDecl,
    MeshDecl,
    MeshTypeDecl,
    PointCloudDecl,
    PointCloudTypeDecl,
)

GENERATED_DIR = "gen"


@dataclass(frozen=True)
class HostType:
    name: str
    host_type: str
    header: str | None


@dataclass(frozen=True)
class StubSpec:
    block_name: str
    model_name: str
    input_hook: tuple[tuple[str, str], ...]
    output_hook: tuple[tuple[str, str], ...]
    input_structure: StructurePattern
    output_structure: StructurePattern
    host_types: tuple[HostType, ...]

    @property
    def class_name(self) -> str:
        return self.block_name[:1].upper() + self.block_name[1:] + "Interface"


def _host_types(names: set[str], model: ValidatedModel) -> tuple[HostType, ...]:
    found = {}
    for name in sorted(names):
        decl = model.node(name)
        if isinstance(decl, GeometricNodeDecl) and isinstance(decl.shape, (PointCloudDecl, MeshDecl)):
            t = model.symbols[decl.shape.type_ref.name]
            assert isinstance(t, (PointCloudTypeDecl, MeshTypeDecl))
            found[t.name] = HostType(t.name, t.host_type, t.header)
    return tuple(found[k] for k in sorted(found))


def stub_spec(block: FunctionBlockDecl, model: ValidatedModel, model_name: str = "model") -> StubSpec:
    def query(name: str) -> tuple[tuple[str, str], ...]:
        return tuple(a.pair() for a in model.node(name).props.attributes)

    structure_nodes = model.reachable_from(block.input_structure.name) | model.reachable_from(
        block.output_structure.name
    )
    return StubSpec(
        block_name=block.name,
        model_name=model_name,
        input_hook=query(block.input_hook.name),
        output_hook=query(block.output_hook.name),
        input_structure=to_pattern(block.input_structure.name, model),
        output_structure=to_pattern(block.output_structure.name, model),
        host_types=_host_types(structure_nodes, model),
    )


class StubEmitter(Protocol):
    extension: str

    def emit(self, spec: StubSpec) -> str: ...


def _py_pattern(p: StructurePattern, indent: int) -> str:
    pad = "    " * indent
    inner = "    " * (indent + 1)
    lines = [f"{pad}StructurePattern("]
    lines.append(f"{inner}kind=NodeKind.{p.kind.name},")
    if p.shape is not None:
        lines.append(f"{inner}shape=ShapeKind.{p.shape.name},")
    if p.attributes:
        lines.append(f"{inner}attributes={p.attributes!r},")
    if p.cardinality is not Cardinality.ONE:
        lines.append(f"{inner}cardinality=Cardinality.{p.cardinality.name},")
    if p.children:
        lines.append(f"{inner}children=(")
        for child in p.children:
            lines.append(_py_pattern(child, indent + 2) + ",")
        lines.append(f"{inner}),")
    lines.append(f"{inner}name={p.name!r},")
    lines.append(f"{pad})")
    return "\n".join(lines)


class PythonStubEmitter:
    extension = "py"

    def emit(self, spec: StubSpec) -> str:
        hosts = ", ".join(f"{h.name!r}: {h.host_type!r}" for h in spec.host_types)
        return f'''\
# Generated by rsgdsl from model {spec.model_name!r}. Do not edit.
# Implement the block in a subclass of {spec.class_name} kept outside
# the generated directory.
"""Interface of the {spec.block_name} function block."""

from __future__ import annotations

import abc

from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind
from rsgdsl.runtime.blocks import BlockInput
from rsgdsl.runtime.instructions import Instruction
from rsgdsl.sem.patterns import StructurePattern


class {spec.class_name}(abc.ABC):
    BLOCK_NAME = {spec.block_name!r}
    INPUT_HOOK = {spec.input_hook!r}
    OUTPUT_HOOK = {spec.output_hook!r}
    HOST_TYPES = {{{hosts}}}

    @staticmethod
    def input_structure() -> StructurePattern:
        return (
{_py_pattern(spec.input_structure, 3)}
        )

    @staticmethod
    def output_structure() -> StructurePattern:
        return (
{_py_pattern(spec.output_structure, 3)}
        )

    @abc.abstractmethod
    def execute(self, inp: BlockInput) -> list[Instruction]:
        """Compute the block output as creation instructions under the output hook."""

    def __call__(self, inp: BlockInput) -> list[Instruction]:
        return self.execute(inp)
'''


def _cpp_str(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def _cpp_attrs(attrs) -> str:
    return "{" + ", ".join(f"{{{_cpp_str(k)}, {_cpp_str(v)}}}" for k, v in attrs) + "}"


def _cpp_pattern(p: StructurePattern, indent: int) -> str:
    pad = "    " * indent
    shape = _cpp_str(p.shape.value) if p.shape else '""'
    any_ = "true" if p.cardinality is Cardinality.ANY else "false"
    head = f"{pad}{{{_cpp_str(p.kind.value)}, {shape}, {_cpp_attrs(p.attributes)}, {any_}, {{"
    if not p.children:
        return head + "}}"
    body = ",\n".join(_cpp_pattern(c, indent + 1) for c in p.children)
    return f"{head}\n{body}\n{pad}}}}}"


class CppStubEmitter:
    extension = "hpp"

    def emit(self, spec: StubSpec) -> str:
        guard = "RSG_GEN_" + re.sub(r"[^A-Za-z0-9]", "_", spec.block_name).upper() + "_INTERFACE_HPP"
        includes = sorted({h.header for h in spec.host_types if h.header})
        include_lines = "".join(f"#include <{h}>\n" for h in includes)
        aliases = "".join(f"    using {h.name} = {h.host_type};\n" for h in spec.host_types)
        return f"""\
// Generated by rsgdsl from model {spec.model_name!r}. Do not edit.
// Derive from {spec.class_name} in hand-written code.
#ifndef {guard}
#define {guard}

#include <string>
#include <utility>
#include <vector>
{include_lines}
namespace rsg {{
namespace gen {{

#ifndef RSG_GEN_STRUCTURE_NODE
#define RSG_GEN_STRUCTURE_NODE
struct StructureNode {{
    std::string kind;
    std::string shape;
    std::vector<std::pair<std::string, std::string>> attributes;
    bool anyCardinality;
    std::vector<StructureNode> children;
}};
#endif

class {spec.class_name} {{
public:
{aliases}    static constexpr const char* blockName = {_cpp_str(spec.block_name)};

    static std::vector<std::pair<std::string, std::string>> inputHook() {{
        return {_cpp_attrs(spec.input_hook)};
    }}

    static std::vector<std::pair<std::string, std::string>> outputHook() {{
        return {_cpp_attrs(spec.output_hook)};
    }}

    static StructureNode inputStructure() {{
        return
{_cpp_pattern(spec.input_structure, 3)};
    }}

    static StructureNode outputStructure() {{
        return
{_cpp_pattern(spec.output_structure, 3)};
    }}

    virtual ~{spec.class_name}() = default;

    virtual bool execute(unsigned int inputHookId, unsigned int outputHookId) = 0;
}};

}}  // namespace gen
}}  // namespace rsg

#endif  // {guard}
"""


BACKENDS: dict[str, StubEmitter] = {"python": PythonStubEmitter(), "cpp": CppStubEmitter()}


def get_backend(backend: str) -> StubEmitter:
    try:
        return BACKENDS[backend]
    except KeyError:
        known = ", ".join(sorted(BACKENDS))
        raise CodegenError("UNSUPPORTED_BACKEND", f"unknown backend {backend!r} (known: {known})") from None


def emit_block_stub(
    block: FunctionBlockDecl,
    model: ValidatedModel,
    backend: str = "python",
    model_name: str = "model",
) -> str:
    return get_backend(backend).emit(stub_spec(block, model, model_name))


def stub_path(out_dir: str | Path, block_name: str, backend: str = "python") -> Path:
    ext = get_backend(backend).extension
    return Path(out_dir) / GENERATED_DIR / f"{block_name}_interface.{ext}"


def write_block_stub(
    block: FunctionBlockDecl,
    model: ValidatedModel,
    out_dir: str | Path,
    backend: str = "python",
    model_name: str = "model",
) -> Path:
    """Write one stub below ``<out_dir>/gen``; nothing outside that directory is touched."""
    text = emit_block_stub(block, model, backend, model_name)
    path = stub_path(out_dir, block.name, backend)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
