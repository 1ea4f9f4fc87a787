"""Model-to-program transformation.

Declarations are created in depth-first preorder from the root so every
parent exists before its children; a node met again through a further parent
is linked with an ``ADD_PARENT`` at the point of the re-encounter. All
quantities are scaled to SI (meters, integer nanoseconds) here, so the
emitted program carries no units.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from rsgdsl.diagnostics import Diagnostic, warning
from rsgdsl.rigid import HomMatrix
from rsgdsl.runtime import instructions as ins
from rsgdsl.runtime.instructions import Instruction, apply_instructions, ordering_problems
from rsgdsl.runtime.shapes import Box, Cylinder, Mesh, PointCloud, Shape
from rsgdsl.runtime.world import WorldModel
from rsgdsl.sem.validate import ValidatedModel
from rsgdsl.syntax.nodes import (
    BoxDecl,
    CylinderDecl,
    GeometricNodeDecl,
    GroupDecl,
    MeshDecl,
    NodeDecl,
    Point,
    PointCloudDecl,
    QuantityDecl,
    TransformDecl,
)
from rsgdsl.units import Quantity, to_nanoseconds, to_si

FORMAT_VERSION = 1


class CodegenError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass
class PrimitiveOrder:
    creation: list[tuple[str, str]] = field(default_factory=list)
    extra_edges: list[tuple[str, str]] = field(default_factory=list)
    # ("create" | "link", child, parent) in emission order
    steps: list[tuple[str, str, str]] = field(default_factory=list)
    unreachable: list[str] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)


def order_primitives(model: ValidatedModel) -> PrimitiveOrder:
    order = PrimitiveOrder()
    root = model.root_name
    visited = {root}
    stack = [iter(model.child_edges.get(root, ()))]
    parents = [root]
    while stack:
        child = next(stack[-1], None)
        if child is None:
            stack.pop()
            parents.pop()
            continue
        parent = parents[-1]
        if child in visited:
            order.extra_edges.append((child, parent))
            order.steps.append(("link", child, parent))
            continue
        visited.add(child)
        order.creation.append((child, parent))
        order.steps.append(("create", child, parent))
        stack.append(iter(model.child_edges.get(child, ())))
        parents.append(child)

    templates = model.structure_names()
    for decl in model.model.node_decls():
        if decl.name in visited:
            continue
        order.unreachable.append(decl.name)
        if decl.name not in templates:
            order.warnings.append(
                warning(
                    decl.pos.line,
                    decl.pos.column,
                    f"{decl.name} is not reachable from root {root!r} and is not instantiated",
                    "UNREACHABLE",
                )
            )
    return order


def _si(q: QuantityDecl) -> float:
    return to_si(Quantity.of(q.magnitude, q.unit))


def _ns(q: QuantityDecl | None) -> int:
    return 0 if q is None else to_nanoseconds(Quantity.of(q.magnitude, q.unit))


def _vec(p: Point) -> tuple[float, float, float]:
    return (_si(p[0]), _si(p[1]), _si(p[2]))


def shape_of(decl: GeometricNodeDecl, model: ValidatedModel) -> Shape:
    s = decl.shape
    if isinstance(s, BoxDecl):
        return Box(_si(s.x), _si(s.y), _si(s.z))
    if isinstance(s, CylinderDecl):
        return Cylinder(_si(s.radius), _si(s.height))
    host = model.symbols[s.type_ref.name].host_type
    if isinstance(s, PointCloudDecl):
        return PointCloud(host, tuple(_vec(p) for p in s.points))
    if isinstance(s, MeshDecl):
        return Mesh(host, tuple(tuple(_vec(p) for p in tri) for tri in s.triangles))
    raise TypeError(f"unknown shape {s!r}")


def cache_of(decl: TransformDecl) -> list[tuple[int, HomMatrix]]:
    return [
        (_ns(entry.stamp), HomMatrix(tuple(float(v) for v in entry.rotation), _vec(entry.translation)))
        for entry in decl.cache
    ]


def _create(name: str, parent: str, model: ValidatedModel) -> Instruction:
    decl = model.node(name)
    attrs = [a.pair() for a in decl.props.attributes]
    if isinstance(decl, NodeDecl):
        return ins.add_node(name, parent, attrs)
    if isinstance(decl, GroupDecl):
        return ins.add_group(name, parent, attrs)
    if isinstance(decl, TransformDecl):
        return ins.add_transform(name, parent, attrs, cache_of(decl))
    if isinstance(decl, GeometricNodeDecl):
        return ins.add_geometry(name, parent, attrs, shape_of(decl, model), _ns(decl.stamp))
    raise TypeError(f"{name} is not a node declaration")


@dataclass
class SetupProgram:
    model_name: str
    root_var: str
    instructions: list[Instruction] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    def to_json(self) -> dict:
        return {
            "formatVersion": self.format_version,
            "modelName": self.model_name,
            "rootVar": self.root_var,
            "instructions": [i.to_json() for i in self.instructions],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> SetupProgram:
        if not isinstance(data, Mapping):
            raise CodegenError("INVALID_PROGRAM", "setup program must be a JSON object")
        if data.get("formatVersion") != FORMAT_VERSION:
            raise CodegenError(
                "INVALID_PROGRAM", f"unsupported formatVersion {data.get('formatVersion')!r}"
            )
        try:
            program = cls(
                data["modelName"],
                data["rootVar"],
                [Instruction.from_json(i) for i in data["instructions"]],
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise CodegenError("INVALID_PROGRAM", f"malformed setup program: {exc}") from None
        problems = ordering_problems(program.instructions, [program.root_var])
        if problems:
            raise CodegenError("INVALID_PROGRAM", "; ".join(problems))
        return program

    @classmethod
    def loads(cls, text: str) -> SetupProgram:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CodegenError("INVALID_PROGRAM", f"not valid JSON: {exc}") from None
        return cls.from_json(data)


def emit_setup_program(model: ValidatedModel, model_name: str = "model") -> SetupProgram:
    order = order_primitives(model)
    program = SetupProgram(model_name, model.root_name)
    for step, child, parent in order.steps:
        if step == "create":
            program.instructions.append(_create(child, parent, model))
        else:
            program.instructions.append(ins.add_parent(child, parent))
    return program


def load_setup_program(program: SetupProgram, world: WorldModel) -> dict[str, int]:
    """Replay ``program`` into ``world``; the root variable maps to the world root.

    Any failure leaves ``world`` unchanged.
    """
    with world.transaction():
        created = apply_instructions(world, program.instructions, {program.root_var: world.root_id})
    return {program.root_var: world.root_id, **created}


def write_setup_program(program: SetupProgram, out_dir: str | Path) -> Path:
    path = Path(out_dir) / f"{program.model_name}.setup.json"
    path.write_text(program.dumps(), encoding="utf-8")
    return path
