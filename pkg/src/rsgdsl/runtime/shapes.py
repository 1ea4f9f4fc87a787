"""Immutable geometry payloads, all lengths in meters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from rsgdsl.kinds import ShapeKind

Vec3 = tuple[float, float, float]


def _vec(v) -> Vec3:
    x, y, z = (float(c) for c in v)
    return (x, y, z)


@dataclass(frozen=True)
class Box:
    x: float
    y: float
    z: float

    kind = ShapeKind.BOX

    def dimensions(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y, "z": self.z}

    def to_json(self) -> dict:
        return {"type": "Box", **self.dimensions()}


@dataclass(frozen=True)
class Cylinder:
    radius: float
    height: float

    kind = ShapeKind.CYLINDER

    def dimensions(self) -> dict[str, float]:
        return {"radius": self.radius, "height": self.height}

    def to_json(self) -> dict:
        return {"type": "Cylinder", **self.dimensions()}


@dataclass(frozen=True)
class PointCloud:
    type_name: str
    points: tuple[Vec3, ...] = ()

    kind = ShapeKind.POINT_CLOUD

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(_vec(p) for p in self.points))

    def dimensions(self) -> dict[str, float]:
        return {}

    def to_json(self) -> dict:
        return {"type": "PointCloud", "typeName": self.type_name, "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class Mesh:
    type_name: str
    triangles: tuple[tuple[Vec3, Vec3, Vec3], ...] = ()

    kind = ShapeKind.MESH

    def __post_init__(self) -> None:
        tris = tuple(tuple(_vec(p) for p in tri) for tri in self.triangles)
        if any(len(t) != 3 for t in tris):
            raise ValueError("mesh triangles need exactly three vertices")
        object.__setattr__(self, "triangles", tris)

    def dimensions(self) -> dict[str, float]:
        return {}

    def to_json(self) -> dict:
        return {
            "type": "Mesh",
            "typeName": self.type_name,
            "triangles": [[list(p) for p in tri] for tri in self.triangles],
        }


Shape = Union[Box, Cylinder, PointCloud, Mesh]


def shape_problem(shape: Shape) -> str | None:
    for name, value in shape.dimensions().items():
        if not value > 0:
            return f"{type(shape).__name__} {name} must be positive, got {value}"
    coords: list[float] = []
    if isinstance(shape, PointCloud):
        coords = [c for p in shape.points for c in p]
    elif isinstance(shape, Mesh):
        coords = [c for tri in shape.triangles for p in tri for c in p]
    if not all(math.isfinite(c) for c in coords):
        return "geometry coordinates must be finite"
    return None


def shape_from_json(data: dict) -> Shape:
    kind = data["type"]
    if kind == "Box":
        return Box(float(data["x"]), float(data["y"]), float(data["z"]))
    if kind == "Cylinder":
        return Cylinder(float(data["radius"]), float(data["height"]))
    if kind == "PointCloud":
        return PointCloud(data["typeName"], tuple(data["points"]))
    if kind == "Mesh":
        return Mesh(data["typeName"], tuple(tuple(t) for t in data["triangles"]))
    raise ValueError(f"unknown shape type {kind!r}")
