"""Enumerations shared by the syntax tree, the validator and the runtime."""

from __future__ import annotations

from enum import Enum


class NodeKind(str, Enum):
    NODE = "NODE"
    GROUP = "GROUP"
    TRANSFORM = "TRANSFORM"
    GEOMETRY = "GEOMETRY"

    @property
    def group_like(self) -> bool:
        return self in (NodeKind.GROUP, NodeKind.TRANSFORM)


class ShapeKind(str, Enum):
    BOX = "BOX"
    CYLINDER = "CYLINDER"
    POINT_CLOUD = "POINT_CLOUD"
    MESH = "MESH"


class Cardinality(str, Enum):
    """Multiplicity of a node inside a block structure; ``*`` is ANY."""

    ONE = "ONE"
    ANY = "ANY"

    def admits(self, other: Cardinality) -> bool:
        """True if a producer with ``self`` multiplicity can feed ``other``.

        ONE feeds ONE or ANY, ANY only feeds ANY.
        """
        return self is Cardinality.ONE or other is Cardinality.ANY
