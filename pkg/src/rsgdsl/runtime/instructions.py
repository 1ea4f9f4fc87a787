"""Creation instructions replayable against a :class:`WorldModel`.

Setup programs and function-block bodies both describe their output as a list
of these instructions. Variables name nodes; each ``ADD_*`` instruction
defines its ``var`` once and ``ADD_PARENT`` links an existing ``var`` under
another existing ``parent_var``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from rsgdsl.rigid import HomMatrix
from rsgdsl.runtime.shapes import Shape, shape_from_json
from rsgdsl.runtime.world import SceneGraphError, WorldModel


class Op(str, Enum):
    ADD_NODE = "ADD_NODE"
    ADD_GROUP = "ADD_GROUP"
    ADD_TRANSFORM = "ADD_TRANSFORM"
    ADD_GEOMETRY = "ADD_GEOMETRY"
    ADD_PARENT = "ADD_PARENT"


@dataclass
class Instruction:
    op: Op
    var: str
    parent_var: str
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "op": self.op.value,
            "var": self.var,
            "parentVar": self.parent_var,
            "payload": self.payload,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Instruction:
        return cls(Op(data["op"]), data["var"], data["parentVar"], dict(data.get("payload", {})))


def _attr_payload(attributes: Iterable) -> list[list[str]]:
    return [[k, v] for k, v in attributes]


def add_node(var: str, parent_var: str, attributes: Iterable = ()) -> Instruction:
    return Instruction(Op.ADD_NODE, var, parent_var, {"attributes": _attr_payload(attributes)})


def add_group(var: str, parent_var: str, attributes: Iterable = ()) -> Instruction:
    return Instruction(Op.ADD_GROUP, var, parent_var, {"attributes": _attr_payload(attributes)})


def add_transform(
    var: str,
    parent_var: str,
    attributes: Iterable,
    cache: Iterable[tuple[int, HomMatrix]],
) -> Instruction:
    entries = [{"stamp": int(stamp), **m.to_json()} for stamp, m in cache]
    if not entries:
        raise ValueError("a transform needs at least one cache entry")
    payload = {"attributes": _attr_payload(attributes), "cache": entries}
    return Instruction(Op.ADD_TRANSFORM, var, parent_var, payload)


def add_geometry(
    var: str, parent_var: str, attributes: Iterable, shape: Shape, stamp: int
) -> Instruction:
    payload = {"attributes": _attr_payload(attributes), "shape": shape.to_json(), "stamp": int(stamp)}
    return Instruction(Op.ADD_GEOMETRY, var, parent_var, payload)


def add_parent(var: str, parent_var: str) -> Instruction:
    return Instruction(Op.ADD_PARENT, var, parent_var, {})


def ordering_problems(instructions: Iterable[Instruction], predefined: Iterable[str]) -> list[str]:
    """Report references to variables that are not yet defined, and redefinitions."""
    defined = set(predefined)
    problems = []
    for i, ins in enumerate(instructions):
        if ins.parent_var not in defined:
            problems.append(f"instruction {i}: parent {ins.parent_var!r} used before creation")
        if ins.op is Op.ADD_PARENT:
            if ins.var not in defined:
                problems.append(f"instruction {i}: {ins.var!r} used before creation")
        elif ins.var in defined:
            problems.append(f"instruction {i}: {ins.var!r} defined twice")
        else:
            defined.add(ins.var)
    return problems


def apply_instructions(
    world: WorldModel, instructions: Iterable[Instruction], env: Mapping[str, int]
) -> dict[str, int]:
    """Apply instructions in order; returns the ids of the variables they define.

    ``env`` supplies ids for variables that already exist in ``world``. The
    caller is responsible for rollback (see :meth:`WorldModel.transaction`).
    """
    scope = dict(env)
    created: dict[str, int] = {}
    for ins in instructions:
        if ins.parent_var not in scope:
            raise SceneGraphError("UNDEFINED_VAR", f"{ins.parent_var!r} used before creation")
        parent = scope[ins.parent_var]
        if ins.op is Op.ADD_PARENT:
            if ins.var not in scope:
                raise SceneGraphError("UNDEFINED_VAR", f"{ins.var!r} used before creation")
            world.add_parent(scope[ins.var], parent)
            continue
        if ins.var in scope:
            raise SceneGraphError("DUPLICATE_VAR", f"{ins.var!r} defined twice")
        p = ins.payload
        attrs = [tuple(a) for a in p.get("attributes", [])]
        if ins.op is Op.ADD_NODE:
            node_id = world.add_node(parent, attrs)
        elif ins.op is Op.ADD_GROUP:
            node_id = world.add_group(parent, attrs)
        elif ins.op is Op.ADD_TRANSFORM:
            first, *rest = p["cache"]
            node_id = world.add_transform_node(
                parent, attrs, HomMatrix.from_json(first), first["stamp"]
            )
            for entry in rest:
                world.insert_transform(node_id, HomMatrix.from_json(entry), entry["stamp"])
        elif ins.op is Op.ADD_GEOMETRY:
            node_id = world.add_geometric_node(
                parent, attrs, shape_from_json(p["shape"]), p["stamp"]
            )
        else:  # pragma: no cover - Op is exhaustive
            raise SceneGraphError("UNKNOWN_OP", str(ins.op))
        scope[ins.var] = node_id
        created[ins.var] = node_id
    return created
