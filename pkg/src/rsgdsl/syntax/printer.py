"""Canonical pretty-printer for :class:`SourceModel`.

Output keeps declaration order, uses two-space indentation and prints every
number with Python's shortest round-trip representation.
"""

from __future__ import annotations

import json

from rsgdsl.kinds import Cardinality
from rsgdsl.syntax.nodes import (
    BoxDecl,
    CylinderDecl,
    Decl,
    FunctionBlockDecl,
    GeometricNodeDecl,
    GroupDecl,
    MeshDecl,
    MeshTypeDecl,
    NodeDecl,
    NodeProps,
    Point,
    PointCloudDecl,
    PointCloudTypeDecl,
    QuantityDecl,
    SourceModel,
    TransformDecl,
)

INDENT = "  "


def _str(value: str) -> str:
    return json.dumps(value, ensure_ascii=False)


def _num(value: float) -> str:
    return repr(float(value))


def _qty(q: QuantityDecl) -> str:
    return f"{_num(q.magnitude)} {q.unit}"


def _point(p: Point) -> str:
    return "(" + ", ".join(_qty(q) for q in p) + ")"


class _Writer:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.depth = 0

    def line(self, text: str) -> None:
        self.lines.append(INDENT * self.depth + text)

    def open(self, text: str) -> None:
        self.line(text + " {")
        self.depth += 1

    def close(self) -> None:
        self.depth -= 1
        self.line("}")


def _props(w: _Writer, props: NodeProps, with_children: bool) -> None:
    if props.attributes:
        w.open("attributes")
        for attr in props.attributes:
            w.line(f"{_str(attr.key)} = {_str(attr.value)}")
        w.close()
    if props.cardinality is Cardinality.ANY:
        w.line("cardinality *")
    if with_children and props.children:
        w.line("children { " + " ".join(r.name for r in props.children) + " }")


def _shape(w: _Writer, shape) -> None:
    if isinstance(shape, BoxDecl):
        w.line(f"shape Box {{ x {_qty(shape.x)} y {_qty(shape.y)} z {_qty(shape.z)} }}")
    elif isinstance(shape, CylinderDecl):
        w.line(f"shape Cylinder {{ radius {_qty(shape.radius)} height {_qty(shape.height)} }}")
    elif isinstance(shape, PointCloudDecl):
        w.open("shape PointCloud")
        w.line(f"type {shape.type_ref.name}")
        if shape.points:
            w.line("points [")
            w.depth += 1
            for p in shape.points:
                w.line(_point(p))
            w.depth -= 1
            w.line("]")
        w.close()
    elif isinstance(shape, MeshDecl):
        w.open("shape Mesh")
        w.line(f"type {shape.type_ref.name}")
        if shape.triangles:
            w.line("triangles [")
            w.depth += 1
            for tri in shape.triangles:
                w.line("(" + ", ".join(_point(p) for p in tri) + ")")
            w.depth -= 1
            w.line("]")
        w.close()
    else:
        raise TypeError(f"unknown shape {shape!r}")


def _decl(w: _Writer, decl: Decl) -> None:
    if isinstance(decl, NodeDecl):
        w.open(f"Node {decl.name}")
        _props(w, decl.props, with_children=False)
    elif isinstance(decl, GroupDecl):
        w.open(f"Group {decl.name}")
        _props(w, decl.props, with_children=True)
    elif isinstance(decl, TransformDecl):
        w.open(f"Transform {decl.name}")
        _props(w, decl.props, with_children=True)
        w.open("cache")
        for entry in decl.cache:
            w.open("transform")
            w.line("rotation [" + ", ".join(_num(v) for v in entry.rotation) + "]")
            w.line(f"translation {_point(entry.translation)}")
            w.line(f"stamp {_qty(entry.stamp)}")
            w.close()
        w.close()
    elif isinstance(decl, GeometricNodeDecl):
        w.open(f"GeometricNode {decl.name}")
        _props(w, decl.props, with_children=False)
        _shape(w, decl.shape)
        if decl.stamp is not None:
            w.line(f"stamp {_qty(decl.stamp)}")
    elif isinstance(decl, FunctionBlockDecl):
        w.open(f"FunctionBlock {decl.name}")
        for key, ref in decl.references():
            w.line(f"{key} {ref.name}")
    elif isinstance(decl, (PointCloudTypeDecl, MeshTypeDecl)):
        kw = "PointCloudType" if isinstance(decl, PointCloudTypeDecl) else "MeshType"
        w.open(f"{kw} {decl.name}")
        w.line(f"type {_str(decl.host_type)}")
        if decl.header is not None:
            w.line(f"header {_str(decl.header)}")
    else:
        raise TypeError(f"unknown declaration {decl!r}")
    w.close()


def pretty_print(model: SourceModel) -> str:
    w = _Writer()
    w.line(f"root {model.root.name}")
    for decl in model.declarations:
        w.line("")
        _decl(w, decl)
    return "\n".join(w.lines) + "\n"
