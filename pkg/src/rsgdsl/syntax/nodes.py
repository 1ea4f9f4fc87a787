"""Syntax tree for ``.rsg`` sources.

Source positions are carried on most nodes but excluded from equality, so
two trees parsed from differently formatted text compare equal when they
describe the same model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind


@dataclass(frozen=True)
class Pos:
    line: int = 1
    column: int = 1


def _pos() -> Pos:
    return field(default=Pos(), compare=False, repr=False)


@dataclass
class Ref:
    """A by-name reference to another declaration."""

    name: str
    pos: Pos = _pos()


@dataclass
class Attribute:
    key: str
    value: str
    pos: Pos = _pos()

    def pair(self) -> tuple[str, str]:
        return (self.key, self.value)


@dataclass
class QuantityDecl:
    magnitude: float
    unit: str
    pos: Pos = _pos()


Point = tuple[QuantityDecl, QuantityDecl, QuantityDecl]


@dataclass
class NodeProps:
    attributes: list[Attribute] = field(default_factory=list)
    cardinality: Cardinality = Cardinality.ONE
    children: list[Ref] = field(default_factory=list)


@dataclass
class RigidTransformDecl:
    rotation: tuple[float, ...]  # 9 entries, row major
    translation: Point
    stamp: QuantityDecl
    pos: Pos = _pos()


@dataclass
class BoxDecl:
    x: QuantityDecl
    y: QuantityDecl
    z: QuantityDecl

    shape_kind = ShapeKind.BOX

    def dimensions(self) -> list[tuple[str, QuantityDecl]]:
        return [("x", self.x), ("y", self.y), ("z", self.z)]


@dataclass
class CylinderDecl:
    radius: QuantityDecl
    height: QuantityDecl

    shape_kind = ShapeKind.CYLINDER

    def dimensions(self) -> list[tuple[str, QuantityDecl]]:
        return [("radius", self.radius), ("height", self.height)]


@dataclass
class PointCloudDecl:
    type_ref: Ref
    points: list[Point] = field(default_factory=list)

    shape_kind = ShapeKind.POINT_CLOUD

    def dimensions(self) -> list[tuple[str, QuantityDecl]]:
        return []


@dataclass
class MeshDecl:
    type_ref: Ref
    triangles: list[tuple[Point, Point, Point]] = field(default_factory=list)

    shape_kind = ShapeKind.MESH

    def dimensions(self) -> list[tuple[str, QuantityDecl]]:
        return []


GeometryDecl = Union[BoxDecl, CylinderDecl, PointCloudDecl, MeshDecl]


@dataclass
class NodeDecl:
    name: str
    props: NodeProps = field(default_factory=NodeProps)
    pos: Pos = _pos()

    kind = NodeKind.NODE


@dataclass
class GroupDecl:
    name: str
    props: NodeProps = field(default_factory=NodeProps)
    pos: Pos = _pos()

    kind = NodeKind.GROUP


@dataclass
class TransformDecl:
    name: str
    props: NodeProps = field(default_factory=NodeProps)
    cache: list[RigidTransformDecl] = field(default_factory=list)
    pos: Pos = _pos()

    kind = NodeKind.TRANSFORM


@dataclass
class GeometricNodeDecl:
    name: str
    shape: GeometryDecl
    props: NodeProps = field(default_factory=NodeProps)
    stamp: QuantityDecl | None = None
    pos: Pos = _pos()

    kind = NodeKind.GEOMETRY


@dataclass
class FunctionBlockDecl:
    name: str
    input_hook: Ref
    input_structure: Ref
    output_hook: Ref
    output_structure: Ref
    pos: Pos = _pos()

    def references(self) -> list[tuple[str, Ref]]:
        return [
            ("inputHook", self.input_hook),
            ("inputStructure", self.input_structure),
            ("outputHook", self.output_hook),
            ("outputStructure", self.output_structure),
        ]


@dataclass
class PointCloudTypeDecl:
    name: str
    host_type: str
    header: str | None = None
    pos: Pos = _pos()


@dataclass
class MeshTypeDecl:
    name: str
    host_type: str
    header: str | None = None
    pos: Pos = _pos()


NodeLikeDecl = Union[NodeDecl, GroupDecl, TransformDecl, GeometricNodeDecl]
Decl = Union[
    NodeDecl,
    GroupDecl,
    TransformDecl,
    GeometricNodeDecl,
    FunctionBlockDecl,
    PointCloudTypeDecl,
    MeshTypeDecl,
]
NODE_DECL_TYPES = (NodeDecl, GroupDecl, TransformDecl, GeometricNodeDecl)


def is_node_decl(decl: Decl) -> bool:
    return isinstance(decl, NODE_DECL_TYPES)


@dataclass
class SourceModel:
    declarations: list[Decl]
    root: Ref

    def node_decls(self) -> list[NodeLikeDecl]:
        return [d for d in self.declarations if is_node_decl(d)]

    def blocks(self) -> list[FunctionBlockDecl]:
        return [d for d in self.declarations if isinstance(d, FunctionBlockDecl)]
