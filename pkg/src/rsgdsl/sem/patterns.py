"""Structure patterns for function-block inputs and outputs.

A pattern is a tree of node kinds, required attributes and cardinalities.
Matching anchors the pattern root on one concrete node and embeds the
pattern children injectively among concrete children:

* every pattern node reachable from the root through ONE children only is
  assigned exactly one distinct concrete node; the first assignment in
  (pattern preorder, ascending node id) order is chosen, so the result is
  deterministic;
* afterwards each ANY child collects, greedily and in ascending id order,
  every remaining concrete child that hosts its whole sub-pattern.

Whether a match exists therefore depends only on the ONE part; ANY nodes
may bind nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Protocol, Sequence

from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind
from rsgdsl.sem.validate import ValidatedModel
from rsgdsl.syntax.nodes import FunctionBlockDecl, GeometricNodeDecl

PatternPath = tuple[int, ...]


@dataclass(frozen=True)
class StructurePattern:
    kind: NodeKind
    shape: ShapeKind | None = None
    attributes: tuple[tuple[str, str], ...] = ()
    cardinality: Cardinality = Cardinality.ONE
    children: tuple[StructurePattern, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if (self.shape is None) == (self.kind is NodeKind.GEOMETRY):
            raise ValueError("shape is required exactly for GEOMETRY patterns")
        if self.children and not self.kind.group_like:
            raise ValueError(f"{self.kind.value} patterns cannot have children")

    @property
    def label(self) -> str:
        base = self.name or (self.shape.value if self.shape else self.kind.value)
        return base + ("*" if self.cardinality is Cardinality.ANY else "")

    def walk(self, path: PatternPath = ()) -> Iterator[tuple[PatternPath, StructurePattern]]:
        """Yield ``(path, pattern)`` in preorder."""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(path + (i,))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def describe(self, indent: int = 0) -> str:
        parts = [_kind_text(self)]
        if self.attributes:
            parts.append("{" + ", ".join(f"{k}={v}" for k, v in self.attributes) + "}")
        parts.append(self.cardinality.value)
        line = "  " * indent + " ".join(parts)
        return "\n".join([line] + [c.describe(indent + 1) for c in self.children])


def to_pattern(name: str, model: ValidatedModel) -> StructurePattern:
    """Expand the declaration subtree under ``name`` into a pattern tree.

    Declarations shared by several parents are duplicated in the tree.
    """
    decl = model.node(name)
    shape = decl.shape.shape_kind if isinstance(decl, GeometricNodeDecl) else None
    return StructurePattern(
        kind=decl.kind,
        shape=shape,
        attributes=tuple(a.pair() for a in decl.props.attributes),
        cardinality=decl.props.cardinality,
        children=tuple(to_pattern(child, model) for child in model.child_edges.get(name, ())),
        name=name,
    )


class Snapshot(Protocol):
    """Read-only view of a concrete scene graph used for matching."""

    def kind(self, node_id: int) -> NodeKind: ...

    def shape_kind(self, node_id: int) -> ShapeKind | None: ...

    def attributes(self, node_id: int) -> Sequence[tuple[str, str]]: ...

    def children(self, node_id: int) -> Sequence[int]: ...


@dataclass
class MatchResult:
    matched: bool
    bindings: dict[PatternPath, list[int]] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.matched

    def bound(self, path: PatternPath = ()) -> list[int]:
        return self.bindings.get(path, [])

    def bound_ids(self) -> set[int]:
        return {i for ids in self.bindings.values() for i in ids}


def accepts(pattern: StructurePattern, graph: Snapshot, node_id: int) -> bool:
    """Single-node test: kind, shape kind and attribute subset."""
    if graph.kind(node_id) is not pattern.kind:
        return False
    if pattern.shape is not None and graph.shape_kind(node_id) is not pattern.shape:
        return False
    if pattern.attributes:
        have = set(graph.attributes(node_id))
        return all(a in have for a in pattern.attributes)
    return True


def one_closure(
    pattern: StructurePattern, path: PatternPath = ()
) -> list[tuple[PatternPath, StructurePattern, int]]:
    """Pattern nodes reached from ``pattern`` through ONE children only.

    Entries are ``(path, node, parent_index)`` in preorder; the root has
    parent index -1.
    """
    out = [(path, pattern, -1)]

    def visit(p: StructurePattern, p_path: PatternPath, index: int) -> None:
        for i, child in enumerate(p.children):
            if child.cardinality is Cardinality.ONE:
                out.append((p_path + (i,), child, index))
                visit(child, p_path + (i,), len(out) - 1)

    visit(pattern, path, 0)
    return out


class _Matcher:
    def __init__(self, graph: Snapshot):
        self.graph = graph
        self.used: set[int] = set()
        self.bindings: dict[PatternPath, list[int]] = {}
        self.failed_at = ""

    def children(self, node_id: int) -> list[int]:
        return sorted(self.graph.children(node_id))

    def embed(self, closure, anchor: int) -> list[int] | None:
        assignment = [anchor]
        taken = {anchor}
        deepest = [0]

        def search(i: int) -> bool:
            if i == len(closure):
                return True
            deepest[0] = max(deepest[0], i)
            _path, pat, parent = closure[i]
            for cand in self.children(assignment[parent]):
                if cand in taken or cand in self.used or not accepts(pat, self.graph, cand):
                    continue
                assignment.append(cand)
                taken.add(cand)
                if search(i + 1):
                    return True
                assignment.pop()
                taken.discard(cand)
            return False

        if search(1):
            return assignment
        _path, pat, _parent = closure[deepest[0]]
        self.failed_at = f"no injective placement of {pat.label} below [{anchor}]"
        return None

    def match_at(self, pattern: StructurePattern, path: PatternPath, node_id: int) -> bool:
        if node_id in self.used or not accepts(pattern, self.graph, node_id):
            self.failed_at = f"[{node_id}] does not match {pattern.label}"
            return False
        closure = one_closure(pattern, path)
        assignment = self.embed(closure, node_id)
        if assignment is None:
            return False
        self.used.update(assignment)
        for (p_path, _pat, _parent), nid in zip(closure, assignment):
            self.bindings.setdefault(p_path, []).append(nid)
        for (p_path, pat, _parent), nid in zip(closure, assignment):
            for i, child in enumerate(pat.children):
                if child.cardinality is not Cardinality.ANY:
                    continue
                c_path = p_path + (i,)
                self.bindings.setdefault(c_path, [])
                for cand in self.children(nid):
                    if cand not in self.used:
                        self.match_at(child, c_path, cand)
        return True


def match_pattern(pattern: StructurePattern, graph: Snapshot, anchor: int) -> MatchResult:
    """Match ``pattern`` with its root on ``anchor``; never raises on mismatch."""
    m = _Matcher(graph)
    if not m.match_at(pattern, (), anchor):
        return MatchResult(False, {}, m.failed_at)
    return MatchResult(True, m.bindings)


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    explanation: str

    def __bool__(self) -> bool:
        return self.compatible


def _kind_text(p: StructurePattern) -> str:
    return p.kind.value if p.shape is None else f"GEOMETRY({p.shape.value})"


def _subsumes(producer: StructurePattern, consumer: StructurePattern, where: str) -> str | None:
    """Return None if ``producer`` satisfies ``consumer``, else the mismatch."""
    here = f"{where}/{consumer.label}" if where else consumer.label
    if producer.kind is not consumer.kind or producer.shape is not consumer.shape:
        return f"{here}: kind {_kind_text(producer)} cannot satisfy {_kind_text(consumer)}"
    missing = [a for a in consumer.attributes if a not in set(producer.attributes)]
    if missing:
        return f"{here}: attribute {missing[0][0]}={missing[0][1]} not guaranteed"
    if not producer.cardinality.admits(consumer.cardinality):
        return (
            f"{here}: cardinality {producer.cardinality.value} cannot satisfy "
            f"{consumer.cardinality.value}"
        )

    options: list[list[int]] = []
    for c_child in consumer.children:
        fits, reasons = [], []
        for j, p_child in enumerate(producer.children):
            reason = _subsumes(p_child, c_child, here)
            if reason is None:
                fits.append(j)
            else:
                reasons.append(reason)
        if not fits:
            return reasons[0] if reasons else f"{here}/{c_child.label}: no producer child"
        options.append(fits)

    taken: set[int] = set()

    def assign(i: int) -> bool:
        if i == len(options):
            return True
        for j in options[i]:
            if j not in taken:
                taken.add(j)
                if assign(i + 1):
                    return True
                taken.discard(j)
        return False

    if not assign(0):
        return f"{here}: not enough distinct producer children for the consumer children"
    return None


def pattern_compatible(producer: StructurePattern, consumer: StructurePattern) -> Compatibility:
    """Decide whether every instance of ``producer`` also satisfies ``consumer``.

    Kinds must be equal, consumer attributes must be a subset of the
    producer's, consumer children map injectively onto producer children, and
    cardinalities follow ONE -> {ONE, ANY}, ANY -> ANY.
    """
    reason = _subsumes(producer, consumer, "")
    if reason is None:
        return Compatibility(True, "compatible")
    return Compatibility(False, reason)


def check_block_compatibility(
    producer: FunctionBlockDecl, consumer: FunctionBlockDecl, model: ValidatedModel
) -> Compatibility:
    out = to_pattern(producer.output_structure.name, model)
    needed = to_pattern(consumer.input_structure.name, model)
    return pattern_compatible(out, needed)
