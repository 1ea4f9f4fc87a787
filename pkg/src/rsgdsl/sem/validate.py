"""Meta-model constraints over a resolved model."""

from __future__ import annotations

from dataclasses import dataclass, field

from rsgdsl.diagnostics import Diagnostic, ValidationError, error, warning
from rsgdsl.kinds import Cardinality
from rsgdsl.rigid import rotation_problem
from rsgdsl.sem.resolve import SymbolTable
from rsgdsl.syntax.nodes import (
    FunctionBlockDecl,
    GeometricNodeDecl,
    MeshDecl,
    NodeLikeDecl,
    PointCloudDecl,
    Pos,
    QuantityDecl,
    SourceModel,
    TransformDecl,
)
from rsgdsl.units import Dimension, Quantity, lookup_unit, to_nanoseconds, to_si

DEFAULT_WINDOW_NS = 10 * 10**9


@dataclass
class ValidatedModel:
    model: SourceModel
    symbols: SymbolTable
    child_edges: dict[str, list[str]]
    blocks: list[FunctionBlockDecl]
    warnings: list[Diagnostic] = field(default_factory=list)
    window_ns: int = DEFAULT_WINDOW_NS

    @property
    def root_name(self) -> str:
        return self.symbols.root_name

    def node(self, name: str) -> NodeLikeDecl:
        return self.symbols.node(name)

    def block(self, name: str) -> FunctionBlockDecl:
        for block in self.blocks:
            if block.name == name:
                return block
        raise KeyError(f"no FunctionBlock named {name!r}")

    def structure_names(self) -> set[str]:
        """Names reachable from any block's input or output structure."""
        names: set[str] = set()
        for block in self.blocks:
            for ref in (block.input_structure, block.output_structure):
                names |= self.reachable_from(ref.name)
        return names

    def reachable_from(self, start: str) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for child in self.child_edges.get(stack.pop(), ()):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return seen


def _find_cycles(edges: dict[str, list[str]], order: list[str]) -> list[list[str]]:
    white, grey, black = 0, 1, 2
    color = {name: white for name in order}
    cycles: list[list[str]] = []
    for start in order:
        if color[start] != white:
            continue
        color[start] = grey
        path = [start]
        stack = [iter(edges.get(start, ()))]
        while stack:
            child = next(stack[-1], None)
            if child is None:
                stack.pop()
                color[path.pop()] = black
            elif color[child] == grey:
                cycles.append(path[path.index(child):] + [child])
            elif color[child] == white:
                color[child] = grey
                path.append(child)
                stack.append(iter(edges.get(child, ())))
    return cycles


class _Checker:
    def __init__(self) -> None:
        self.diags: list[Diagnostic] = []

    def err(self, pos: Pos, message: str, code: str) -> None:
        self.diags.append(error(pos.line, pos.column, message, code))

    def warn(self, pos: Pos, message: str, code: str) -> None:
        self.diags.append(warning(pos.line, pos.column, message, code))

    def quantity(self, q: QuantityDecl, dimension: Dimension, what: str) -> bool:
        unit = lookup_unit(q.unit)
        if unit.dimension is not dimension:
            self.err(
                q.pos,
                f"{what} needs a {dimension.value.lower()} unit, got {q.unit!r}",
                "DIMENSION_MISMATCH",
            )
            return False
        return True


def _check_transform(c: _Checker, decl: TransformDecl, window_ns: int) -> None:
    stamps: list[int] = []
    for entry in decl.cache:
        problem = rotation_problem(entry.rotation)
        if problem:
            c.err(entry.pos, f"{decl.name}: {problem}", "INVALID_ROTATION")
        for q in entry.translation:
            c.quantity(q, Dimension.LENGTH, "translation")
        if c.quantity(entry.stamp, Dimension.TIME, "stamp"):
            ns = to_nanoseconds(Quantity.of(entry.stamp.magnitude, entry.stamp.unit))
            if stamps and ns <= stamps[-1]:
                c.err(
                    entry.stamp.pos,
                    f"{decl.name}: cache stamps must be strictly increasing",
                    "NONMONOTONE_CACHE",
                )
            stamps.append(ns)
    if stamps and stamps[-1] - stamps[0] > window_ns:
        c.warn(
            decl.pos,
            f"{decl.name}: cache spans more than the {window_ns / 1e9:g} s window; "
            "older entries are evicted when loaded",
            "CACHE_WINDOW",
        )


def _check_geometry(c: _Checker, decl: GeometricNodeDecl) -> None:
    for dim_name, q in decl.shape.dimensions():
        if c.quantity(q, Dimension.LENGTH, dim_name):
            if to_si(Quantity.of(q.magnitude, q.unit)) <= 0:
                c.err(
                    q.pos,
                    f"{decl.name}: {dim_name} must be positive",
                    "NONPOSITIVE_DIMENSION",
                )
    if isinstance(decl.shape, PointCloudDecl):
        points = decl.shape.points
    elif isinstance(decl.shape, MeshDecl):
        points = [p for tri in decl.shape.triangles for p in tri]
    else:
        points = []
    for point in points:
        for q in point:
            c.quantity(q, Dimension.LENGTH, "point coordinate")
    if decl.stamp is not None:
        c.quantity(decl.stamp, Dimension.TIME, "stamp")


def validate(
    model: SourceModel, symbols: SymbolTable, window_ns: int = DEFAULT_WINDOW_NS
) -> ValidatedModel:
    """Check structural and value constraints of a resolved model.

    Raises :class:`ValidationError` if any error is found; warnings are kept
    on the returned :class:`ValidatedModel`.
    """
    c = _Checker()
    nodes = model.node_decls()
    edges: dict[str, list[str]] = {}
    for decl in nodes:
        props = decl.props
        children = [r.name for r in props.children]
        if children and not decl.kind.group_like:
            c.err(decl.pos, f"{decl.name} is a leaf and cannot have children", "CHILD_ON_LEAF")
        seen_children: set[str] = set()
        for ref in props.children:
            if ref.name in seen_children:
                c.err(ref.pos, f"{decl.name} lists child {ref.name!r} twice", "DUPLICATE_CHILD")
            seen_children.add(ref.name)
        edges[decl.name] = children
        seen_attrs: set[tuple[str, str]] = set()
        for attr in props.attributes:
            if attr.pair() in seen_attrs:
                c.err(
                    attr.pos,
                    f"{decl.name} repeats attribute ({attr.key!r}, {attr.value!r})",
                    "DUPLICATE_ATTRIBUTE",
                )
            seen_attrs.add(attr.pair())
        if isinstance(decl, TransformDecl):
            _check_transform(c, decl, window_ns)
        elif isinstance(decl, GeometricNodeDecl):
            _check_geometry(c, decl)

    for cycle in _find_cycles(edges, [d.name for d in nodes]):
        decl = symbols.node(cycle[0])
        c.err(decl.pos, "child cycle " + " -> ".join(cycle), "CYCLE_DETECTED")

    errors = [d for d in c.diags if d.is_error]
    if errors:
        raise ValidationError(c.diags)

    vm = ValidatedModel(model, symbols, edges, model.blocks(), window_ns=window_ns)
    root = symbols.node(symbols.root_name)
    if root.props.attributes or isinstance(root, TransformDecl):
        c.warn(
            root.pos,
            f"root {root.name!r} stands for the world model root; its attributes"
            + (" and cache" if isinstance(root, TransformDecl) else "")
            + " are not instantiated",
            "ROOT_PAYLOAD_IGNORED",
        )
    templates = vm.structure_names()
    for decl in nodes:
        if decl.props.cardinality is not Cardinality.ONE and decl.name not in templates:
            c.warn(
                decl.pos,
                f"{decl.name}: cardinality only has meaning inside a block structure",
                "CARDINALITY_OUTSIDE_STRUCTURE",
            )
    vm.warnings = c.diags
    return vm
