"""In-process Robot Scene Graph.

Nodes live in a DAG rooted at id 1. Ids come from a per-instance counter and
are never reused. Group and Transform nodes hold an ordered child list;
Node and GeometricNode are leaves. Geometry is immutable once inserted and
transforms keep a time-windowed cache.

Every public method takes the instance lock, so each operation is atomic;
readers and writers are serialized, which is a strict form of the
single-writer/multi-reader contract.
"""

from __future__ import annotations

import contextlib
import json
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, Union

from rsgdsl.kinds import NodeKind, ShapeKind
from rsgdsl.rigid import HomMatrix, rotation_problem
from rsgdsl.runtime.cache import DEFAULT_WINDOW_NS, CacheError, TransformCache
from rsgdsl.runtime.shapes import Shape, shape_problem

ROOT_ID = 1

Attr = tuple[str, str]


class SceneGraphError(Exception):
    """Runtime failure; ``code`` names the violated contract."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass
class SceneNode:
    id: int
    kind: NodeKind
    attributes: tuple[Attr, ...]
    parents: set[int] = field(default_factory=set)
    children: list[int] = field(default_factory=list)
    cache: TransformCache | None = None
    shape: Shape | None = None
    stamp: int | None = None


@dataclass(frozen=True)
class Latest:
    """Prefer the path whose stalest transform is freshest."""


@dataclass(frozen=True)
class Tagged:
    """Keep paths through a node carrying all ``required`` attributes, then apply Latest."""

    required: tuple[Attr, ...]

    def __post_init__(self) -> None:
        if not self.required:
            raise ValueError("Tagged policy needs at least one attribute")
        object.__setattr__(self, "required", tuple(tuple(a) for a in self.required))


PathPolicy = Union[Latest, Tagged]
LATEST = Latest()


def _attrs(attributes: Iterable) -> tuple[Attr, ...]:
    out = []
    for a in attributes:
        key, value = (a.key, a.value) if hasattr(a, "key") else a
        if not key:
            raise SceneGraphError("INVALID_ATTRIBUTE", "attribute key must not be empty")
        out.append((str(key), str(value)))
    return tuple(out)


class WorldModel:
    def __init__(self, window_ns: int = DEFAULT_WINDOW_NS):
        self.window_ns = window_ns
        self._lock = threading.RLock()
        self._nodes: dict[int, SceneNode] = {
            ROOT_ID: SceneNode(ROOT_ID, NodeKind.GROUP, (("name", "root"),))
        }
        self._next_id = ROOT_ID + 1

    @property
    def root_id(self) -> int:
        return ROOT_ID

    # -- read access (also the pattern-matching Snapshot protocol) -------

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._nodes

    def node_ids(self) -> list[int]:
        with self._lock:
            return sorted(self._nodes)

    def _get(self, node_id: int, code: str = "NO_SUCH_NODE") -> SceneNode:
        node = self._nodes.get(node_id)
        if node is None:
            raise SceneGraphError(code, f"no node with id {node_id}")
        return node

    def kind(self, node_id: int) -> NodeKind:
        return self._get(node_id).kind

    def shape_kind(self, node_id: int) -> ShapeKind | None:
        shape = self._get(node_id).shape
        return shape.kind if shape is not None else None

    def attributes(self, node_id: int) -> tuple[Attr, ...]:
        return self._get(node_id).attributes

    def children(self, node_id: int) -> list[int]:
        with self._lock:
            return list(self._get(node_id).children)

    def parents(self, node_id: int) -> list[int]:
        with self._lock:
            return sorted(self._get(node_id).parents)

    def shape(self, node_id: int) -> Shape:
        node = self._get(node_id)
        if node.shape is None:
            raise SceneGraphError("NOT_A_GEOMETRY", f"node {node_id} has no geometry")
        return node.shape

    def geometry_stamp(self, node_id: int) -> int:
        node = self._get(node_id)
        if node.kind is not NodeKind.GEOMETRY:
            raise SceneGraphError("NOT_A_GEOMETRY", f"node {node_id} has no geometry")
        return node.stamp

    def cache_entries(self, node_id: int) -> list[tuple[int, HomMatrix]]:
        with self._lock:
            return self._transform(node_id).cache.entries()

    # -- creation --------------------------------------------------------

    def _parent_for_insert(self, parent_id: int) -> SceneNode:
        parent = self._get(parent_id, "NO_SUCH_PARENT")
        if not parent.kind.group_like:
            raise SceneGraphError(
                "PARENT_IS_LEAF", f"node {parent_id} is a {parent.kind.value} and has no children"
            )
        return parent

    def _insert(self, parent: SceneNode, node: SceneNode) -> int:
        node.parents.add(parent.id)
        parent.children.append(node.id)
        self._nodes[node.id] = node
        return node.id

    def _allocate(self) -> int:
        node_id = self._next_id
        self._next_id += 1
        return node_id

    def add_node(self, parent_id: int, attributes: Iterable = ()) -> int:
        with self._lock:
            parent = self._parent_for_insert(parent_id)
            attrs = _attrs(attributes)
            return self._insert(parent, SceneNode(self._allocate(), NodeKind.NODE, attrs))

    def add_group(self, parent_id: int, attributes: Iterable = ()) -> int:
        with self._lock:
            parent = self._parent_for_insert(parent_id)
            attrs = _attrs(attributes)
            return self._insert(parent, SceneNode(self._allocate(), NodeKind.GROUP, attrs))

    def add_transform_node(
        self, parent_id: int, attributes: Iterable, initial: HomMatrix, stamp: int
    ) -> int:
        with self._lock:
            parent = self._parent_for_insert(parent_id)
            attrs = _attrs(attributes)
            _check_matrix(initial)
            cache = TransformCache(self.window_ns)
            cache.insert(int(stamp), initial)
            node = SceneNode(self._allocate(), NodeKind.TRANSFORM, attrs, cache=cache)
            return self._insert(parent, node)

    def add_geometric_node(
        self, parent_id: int, attributes: Iterable, shape: Shape, stamp: int
    ) -> int:
        with self._lock:
            parent = self._parent_for_insert(parent_id)
            attrs = _attrs(attributes)
            problem = shape_problem(shape)
            if problem:
                raise SceneGraphError("NONPOSITIVE_DIMENSION", problem)
            node = SceneNode(
                self._allocate(), NodeKind.GEOMETRY, attrs, shape=shape, stamp=int(stamp)
            )
            return self._insert(parent, node)

    # -- structure edits -------------------------------------------------

    def _reachable(self, start: int, target: int) -> bool:
        stack, seen = [start], {start}
        while stack:
            current = stack.pop()
            if current == target:
                return True
            for child in self._nodes[current].children:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return False

    def add_parent(self, node_id: int, new_parent_id: int) -> None:
        with self._lock:
            node = self._get(node_id)
            parent = self._get(new_parent_id)
            if self._reachable(node_id, new_parent_id):
                raise SceneGraphError(
                    "WOULD_CREATE_CYCLE",
                    f"node {new_parent_id} is reachable from {node_id}",
                )
            if not parent.kind.group_like:
                raise SceneGraphError(
                    "PARENT_IS_LEAF",
                    f"node {new_parent_id} is a {parent.kind.value} and has no children",
                )
            if new_parent_id in node.parents:
                raise SceneGraphError(
                    "DUPLICATE_EDGE", f"node {node_id} is already a child of {new_parent_id}"
                )
            node.parents.add(new_parent_id)
            parent.children.append(node_id)

    def delete_node(self, node_id: int) -> None:
        """Remove a node; descendants left without parents go with it."""
        with self._lock:
            if node_id == ROOT_ID:
                raise SceneGraphError("CANNOT_DELETE_ROOT", "the root node cannot be deleted")
            self._get(node_id)
            doomed = [node_id]
            while doomed:
                current = self._nodes.pop(doomed.pop())
                for parent_id in current.parents:
                    parent = self._nodes.get(parent_id)
                    if parent is not None:
                        parent.children.remove(current.id)
                for child_id in current.children:
                    child = self._nodes[child_id]
                    child.parents.discard(current.id)
                    if not child.parents:
                        doomed.append(child_id)

    # -- transforms ------------------------------------------------------

    def _transform(self, node_id: int) -> SceneNode:
        node = self._get(node_id)
        if node.kind is not NodeKind.TRANSFORM:
            raise SceneGraphError("NOT_A_TRANSFORM", f"node {node_id} is a {node.kind.value}")
        return node

    def insert_transform(self, node_id: int, matrix: HomMatrix, stamp: int) -> None:
        with self._lock:
            node = self._transform(node_id)
            _check_matrix(matrix)
            try:
                node.cache.insert(int(stamp), matrix)
            except CacheError as exc:
                raise SceneGraphError(exc.code, str(exc)) from None

    def get_transform(self, node_id: int, stamp: int) -> HomMatrix:
        with self._lock:
            node = self._transform(node_id)
            try:
                return node.cache.lookup(int(stamp))
            except CacheError as exc:
                raise SceneGraphError(exc.code, f"node {node_id}: {exc}") from None

    def latest_stamp(self, node_id: int) -> int:
        with self._lock:
            return self._transform(node_id).cache.latest

    # -- queries ---------------------------------------------------------

    def paths_to(self, node_id: int) -> list[list[int]]:
        """All root-to-node paths, each listed root first."""
        with self._lock:
            self._get(node_id)
            paths: list[list[int]] = []

            def up(current: int, suffix: list[int]) -> None:
                suffix = [current] + suffix
                if current == ROOT_ID:
                    paths.append(suffix)
                    return
                for parent in sorted(self._nodes[current].parents):
                    up(parent, suffix)

            up(node_id, [])
            return sorted(paths)

    def _freshness(self, path: Sequence[int]) -> float:
        stamps = [
            self._nodes[n].cache.latest
            for n in path
            if self._nodes[n].kind is NodeKind.TRANSFORM
        ]
        return min(stamps) if stamps else float("inf")

    def resolve_path(self, node_id: int, stamp: int = 0, policy: PathPolicy = LATEST) -> list[int]:
        """Pick one root-to-node path.

        Latest maximizes the minimum latest-update stamp over the transforms on
        the path (paths without transforms rank highest). Tagged first keeps
        paths with a non-root node carrying every required attribute. Ties go
        to the lexicographically smallest id sequence. ``stamp`` is accepted
        for interface symmetry; scoring uses cache contents only.
        """
        with self._lock:
            paths = self.paths_to(node_id)
            if isinstance(policy, Tagged):
                required = set(policy.required)
                paths = [
                    p
                    for p in paths
                    if any(required <= set(self._nodes[n].attributes) for n in p[1:])
                ]
                if not paths:
                    raise SceneGraphError(
                        "NO_PATH", f"no path to node {node_id} carries {sorted(required)}"
                    )
            elif not isinstance(policy, Latest):
                raise TypeError(f"unknown path policy {policy!r}")
            return min(paths, key=lambda p: (-self._freshness(p), p))

    def get_global_transform(self, node_id: int, stamp: int = 0, policy: PathPolicy = LATEST) -> HomMatrix:
        """Compose transforms along the selected path, root-most first.

        A transform node contributes its own matrix, so querying a transform
        yields the pose of the frame it defines.
        """
        with self._lock:
            result = HomMatrix()
            for n in self.resolve_path(node_id, stamp, policy):
                if self._nodes[n].kind is NodeKind.TRANSFORM:
                    result = result @ self.get_transform(n, stamp)
            return result

    def find_nodes(self, query: Iterable = ()) -> list[int]:
        wanted = set(_attrs(query))
        with self._lock:
            return sorted(n.id for n in self._nodes.values() if wanted <= set(n.attributes))

    def traverse(
        self,
        start: int,
        max_depth: int | None = None,
        visitor: Callable[[int, int], bool | None] | None = None,
    ) -> list[int]:
        """Depth-first preorder from ``start``.

        Shared nodes are visited once per distinct path. Descent stops at
        ``max_depth`` or where ``visitor(node_id, depth)`` returns False.
        """
        if max_depth is not None and max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        with self._lock:
            self._get(start)
            order: list[int] = []

            def visit(node_id: int, depth: int) -> None:
                order.append(node_id)
                keep_going = visitor(node_id, depth) if visitor else True
                if keep_going is False or (max_depth is not None and depth >= max_depth):
                    return
                for child in self._nodes[node_id].children:
                    visit(child, depth + 1)

            visit(start, 0)
            return order

    # -- snapshots and transactions --------------------------------------

    def to_json(self) -> dict:
        with self._lock:
            nodes = []
            for node_id in sorted(self._nodes):
                node = self._nodes[node_id]
                item: dict = {
                    "id": node.id,
                    "kind": node.kind.value,
                    "attributes": [list(a) for a in node.attributes],
                    "parents": sorted(node.parents),
                    "children": list(node.children),
                }
                if node.cache is not None:
                    item["cache"] = [
                        {"stamp": s, **m.to_json()} for s, m in node.cache.entries()
                    ]
                if node.shape is not None:
                    item["shape"] = node.shape.to_json()
                    item["stamp"] = node.stamp
                nodes.append(item)
            return {"root": ROOT_ID, "nodes": nodes}

    def snapshot_json(self) -> str:
        """Canonical serialized snapshot (nodes sorted by id)."""
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @contextlib.contextmanager
    def transaction(self) -> Iterator[WorldModel]:
        """Hold the lock and undo every graph change if the block raises.

        The id counter is not rewound, so ids handed out inside a failed
        transaction are never reused.
        """
        with self._lock:
            saved = {i: _clone(n) for i, n in self._nodes.items()}
            try:
                yield self
            except BaseException:
                self._nodes = saved
                raise


def _clone(node: SceneNode) -> SceneNode:
    cache = None
    if node.cache is not None:
        cache = TransformCache(node.cache.window_ns, list(node.cache.stamps), list(node.cache.matrices))
    # shapes are immutable and shared between the copies
    return SceneNode(
        node.id, node.kind, node.attributes, set(node.parents), list(node.children),
        cache, node.shape, node.stamp,
    )


def _check_matrix(matrix: HomMatrix) -> None:
    problem = rotation_problem(matrix.rotation)
    if problem:
        raise SceneGraphError("INVALID_ROTATION", problem)
    if len(matrix.translation) != 3 or not all(math.isfinite(v) for v in matrix.translation):
        raise SceneGraphError("INVALID_TRANSLATION", "translation needs 3 finite entries")
