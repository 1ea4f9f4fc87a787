"""Random model generators and independent oracles shared by the tests.

The oracles deliberately avoid the package's own helpers (unit table,
HomMatrix, matcher) so that agreement means something.
"""

from __future__ import annotations

import itertools
import math
import random
from pathlib import Path

import numpy as np

from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind
from rsgdsl.sem.patterns import StructurePattern, one_closure
from rsgdsl.syntax.nodes import (
    Attribute,
    BoxDecl,
    CylinderDecl,
    FunctionBlockDecl,
    GeometricNodeDecl,
    GroupDecl,
    MeshDecl,
    MeshTypeDecl,
    NodeDecl,
    NodeProps,
    PointCloudDecl,
    PointCloudTypeDecl,
    QuantityDecl,
    Ref,
    RigidTransformDecl,
    SourceModel,
    TransformDecl,
)

CORPUS = Path(__file__).resolve().parents[1] / "src" / "rsgdsl" / "corpus"

# Independent unit table used by the oracles.
SI = {
    "m": 1.0, "dm": 0.1, "cm": 0.01, "mm": 0.001,
    "s": 1.0, "ms": 1e-3, "us": 1e-6, "min": 60.0, "h": 3600.0,
    "rad": 1.0, "deg": math.pi / 180,
}
LENGTH_UNITS = ["m", "dm", "cm", "mm"]


def random_rotation(rng: random.Random) -> tuple[float, ...]:
    """Uniform random rotation from a normalized quaternion, row major."""
    w, x, y, z = (rng.gauss(0, 1) for _ in range(4))
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    return (
        1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
        2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
        2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y),
    )


def orthonormalize(m: np.ndarray) -> np.ndarray:
    """Project a 3x3 matrix onto the nearest proper rotation."""
    u, _s, vt = np.linalg.svd(m)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] *= -1
        r = u @ vt
    return r


def _qty(rng: random.Random, units=LENGTH_UNITS, lo=-5.0, hi=5.0) -> QuantityDecl:
    return QuantityDecl(round(rng.uniform(lo, hi), rng.randint(0, 6)), rng.choice(units))


def _positive(rng: random.Random) -> QuantityDecl:
    return QuantityDecl(round(rng.uniform(0.01, 3.0), 4), rng.choice(LENGTH_UNITS))


def _point(rng: random.Random):
    return (_qty(rng), _qty(rng), _qty(rng))


def _attrs(rng: random.Random, max_n: int = 3) -> list[Attribute]:
    keys = rng.sample(["name", "type", "frame", "role", "ké y", "id"], rng.randint(0, max_n))
    values = ["a", "b", "table", "sensor", 'q"uote', "back\\slash", "tab\tnew\nline", "ünï"]
    return [Attribute(k, rng.choice(values)) for k in keys]


def _cache(rng: random.Random) -> list[RigidTransformDecl]:
    stamps = sorted(rng.sample(range(0, 9000), rng.randint(1, 3)))
    return [
        RigidTransformDecl(random_rotation(rng), _point(rng), QuantityDecl(float(s), "ms"))
        for s in stamps
    ]


def _shape(rng: random.Random, cloud_type: str, mesh_type: str):
    choice = rng.randrange(4)
    if choice == 0:
        return BoxDecl(_positive(rng), _positive(rng), _positive(rng))
    if choice == 1:
        return CylinderDecl(_positive(rng), _positive(rng))
    if choice == 2:
        return PointCloudDecl(Ref(cloud_type), [_point(rng) for _ in range(rng.randint(0, 4))])
    return MeshDecl(
        Ref(mesh_type),
        [(_point(rng), _point(rng), _point(rng)) for _ in range(rng.randint(0, 2))],
    )


def random_valid_model(rng: random.Random, max_nodes: int = 30, edge_p: float = 0.2) -> SourceModel:
    """A random model that passes validation.

    Nodes are created in topological order; each later node gets an edge
    from each earlier group-like node with probability ``edge_p``, plus one
    forced parent if none was drawn, so every node is reachable from root.
    """
    n = rng.randint(1, max_nodes)
    kinds = [NodeKind.GROUP] + [
        rng.choice([NodeKind.NODE, NodeKind.GROUP, NodeKind.TRANSFORM, NodeKind.GEOMETRY])
        for _ in range(n - 1)
    ]
    names = ["root"] + [f"n{i}" for i in range(1, n)]
    children: list[list[str]] = [[] for _ in range(n)]
    for j in range(1, n):
        parents = [i for i in range(j) if kinds[i].group_like and rng.random() < edge_p]
        if not parents:
            parents = [rng.choice([i for i in range(j) if kinds[i].group_like])]
        for i in parents:
            children[i].append(names[j])
    for child_list in children:
        rng.shuffle(child_list)

    decls: list = [PointCloudTypeDecl("cloudT", "pcl::PointCloud<pcl::PointXYZ>", "pcl/point_cloud.h"),
                   MeshTypeDecl("meshT", "rsg::Mesh", None)]
    for i in range(n):
        props = NodeProps(_attrs(rng) if i else [], children=[Ref(c) for c in children[i]])
        if kinds[i] is NodeKind.GROUP:
            decls.append(GroupDecl(names[i], props))
        elif kinds[i] is NodeKind.TRANSFORM:
            decls.append(TransformDecl(names[i], props, _cache(rng)))
        elif kinds[i] is NodeKind.NODE:
            decls.append(NodeDecl(names[i], props))
        else:
            stamp = QuantityDecl(float(rng.randint(0, 50)), "s") if rng.random() < 0.5 else None
            decls.append(GeometricNodeDecl(names[i], _shape(rng, "cloudT", "meshT"), props, stamp))
    rng.shuffle(decls)
    return SourceModel(decls, Ref("root"))


_WORDS = ["a", "b", "x1", "node", "tf", "Leg_2", "_hidden", "cardinality", "children", "points"]


def random_ast(rng: random.Random) -> SourceModel:
    """A syntactically well-formed model with no semantic guarantees."""
    def name() -> str:
        return rng.choice(_WORDS) + str(rng.randint(0, 99))

    def props(with_children: bool) -> NodeProps:
        return NodeProps(
            _attrs(rng),
            rng.choice([Cardinality.ONE, Cardinality.ANY]),
            [Ref(name()) for _ in range(rng.randint(0, 3))] if with_children else [],
        )

    decls: list = []
    for _ in range(rng.randint(0, 8)):
        kind = rng.randrange(7)
        if kind == 0:
            decls.append(NodeDecl(name(), props(False)))
        elif kind == 1:
            decls.append(GroupDecl(name(), props(True)))
        elif kind == 2:
            decls.append(TransformDecl(name(), props(True), _cache(rng)))
        elif kind == 3:
            stamp = QuantityDecl(rng.uniform(-1e3, 1e3), rng.choice(["s", "ms", "min"])) if rng.random() < 0.5 else None
            decls.append(GeometricNodeDecl(name(), _shape(rng, name(), name()), props(False), stamp))
        elif kind == 4:
            decls.append(FunctionBlockDecl(name(), Ref(name()), Ref(name()), Ref(name()), Ref(name())))
        elif kind == 5:
            decls.append(PointCloudTypeDecl(name(), rng.choice(["pcl::PointCloud<T>", "Cloud"]),
                                            rng.choice([None, "cloud.h"])))
        else:
            decls.append(MeshTypeDecl(name(), "Mesh", rng.choice([None, "mesh/m.h", ""])))
    return SourceModel(decls, Ref(name()))


# -- scene graph oracles ---------------------------------------------------

def oracle_si(q: QuantityDecl) -> float:
    return q.magnitude * SI[q.unit]


def oracle_ns(q: QuantityDecl | None) -> int:
    return 0 if q is None else round(q.magnitude * SI[q.unit] * 1e9)


def correspondence(model: SourceModel, world) -> dict[str, int]:
    """Align declaration names with runtime ids by walking both graphs from
    the root in child order. Raises AssertionError on any inconsistency."""
    decls = {d.name: d for d in model.node_decls()}
    mapping = {model.root.name: world.root_id}
    back = {world.root_id: model.root.name}
    stack = [model.root.name]
    while stack:
        name = stack.pop()
        want = [r.name for r in decls[name].props.children] if hasattr(decls[name].props, "children") else []
        have = world.children(mapping[name])
        assert len(want) == len(have), f"{name}: {len(want)} children declared, {len(have)} loaded"
        for c_name, c_id in zip(want, have):
            if c_name in mapping:
                assert mapping[c_name] == c_id, f"{c_name} reached as two ids"
                continue
            assert c_id not in back, f"id {c_id} reached as {back[c_id]} and {c_name}"
            mapping[c_name] = c_id
            back[c_id] = c_name
            stack.append(c_name)
    return mapping


def assert_isomorphic(model: SourceModel, world, names: dict[str, int], tol: float = 1e-12) -> None:
    mapping = correspondence(model, world)
    assert mapping == names, "loader name map disagrees with the structural alignment"
    assert sorted(mapping.values()) == world.node_ids(), "runtime has nodes the model lacks"
    decls = {d.name: d for d in model.node_decls()}
    for name, node_id in mapping.items():
        if name == model.root.name:
            continue
        d = decls[name]
        assert world.kind(node_id) is d.kind, name
        assert list(world.attributes(node_id)) == [a.pair() for a in d.props.attributes], name
        assert sorted(world.parents(node_id)) == sorted(
            mapping[p.name] for p in model.node_decls() if name in [c.name for c in p.props.children]
        ), name
        if isinstance(d, TransformDecl):
            entries = world.cache_entries(node_id)
            assert len(entries) == len(d.cache), name
            for (stamp, m), e in zip(entries, d.cache):
                assert stamp == oracle_ns(e.stamp)
                assert np.allclose(m.rotation, e.rotation, rtol=0, atol=tol)
                assert np.allclose(m.translation, [oracle_si(q) for q in e.translation], rtol=0, atol=tol)
        if isinstance(d, GeometricNodeDecl):
            shape = world.shape(node_id)
            assert world.geometry_stamp(node_id) == oracle_ns(d.stamp)
            assert world.shape_kind(node_id) is d.shape.shape_kind
            for key, q in d.shape.dimensions():
                assert abs(getattr(shape, key) - oracle_si(q)) <= tol, (name, key)
            if isinstance(d.shape, PointCloudDecl):
                want = [[oracle_si(q) for q in p] for p in d.shape.points]
                assert np.allclose(np.reshape(shape.points, (-1, 3)), np.reshape(want, (-1, 3)), rtol=0, atol=tol)
            if isinstance(d.shape, MeshDecl):
                want = [[[oracle_si(q) for q in p] for p in tri] for tri in d.shape.triangles]
                assert np.allclose(np.reshape(shape.triangles, (-1, 3)), np.reshape(want, (-1, 3)), rtol=0, atol=tol)


def hom(rotation, translation) -> np.ndarray:
    m = np.eye(4)
    m[:3, :3] = np.reshape(rotation, (3, 3))
    m[:3, 3] = translation
    return m


# -- pattern oracles -------------------------------------------------------

def oracle_accepts(p: StructurePattern, graph, node: int) -> bool:
    if graph.kind(node) is not p.kind:
        return False
    if p.shape is not None and graph.shape_kind(node) is not p.shape:
        return False
    return set(p.attributes) <= set(graph.attributes(node))


def one_part(pattern: StructurePattern) -> list[tuple[StructurePattern, int]]:
    """Preorder (pattern node, parent index) over ONE-only descendants."""
    out = [(pattern, -1)]

    def visit(p: StructurePattern, idx: int) -> None:
        for c in p.children:
            if c.cardinality is Cardinality.ONE:
                out.append((c, idx))
                visit(c, len(out) - 1)

    visit(pattern, 0)
    return out


def oracle_embedding(pattern: StructurePattern, graph, anchor: int) -> tuple[int, ...] | None:
    """Lexicographically smallest injective embedding of the ONE part, by
    exhaustive enumeration over all node tuples."""
    part = one_part(pattern)
    if not oracle_accepts(pattern, graph, anchor):
        return None
    others = sorted(n for n in graph.node_ids() if n != anchor)
    for combo in itertools.permutations(others, len(part) - 1):
        assignment = (anchor, *combo)
        if all(
            oracle_accepts(p, graph, assignment[i])
            and assignment[i] in graph.children(assignment[parent])
            for i, (p, parent) in enumerate(part) if i > 0
        ):
            return assignment
    return None


def random_pattern(rng: random.Random, max_nodes: int = 5, attr_pool=("a", "b")) -> StructurePattern:
    budget = [rng.randint(1, max_nodes)]

    def make(depth: int, root: bool) -> StructurePattern:
        budget[0] -= 1
        kind = rng.choice([NodeKind.GROUP, NodeKind.TRANSFORM, NodeKind.NODE, NodeKind.GEOMETRY])
        if budget[0] > 0 and rng.random() < 0.7:
            kind = rng.choice([NodeKind.GROUP, NodeKind.TRANSFORM])
        shape = rng.choice([ShapeKind.BOX, ShapeKind.POINT_CLOUD]) if kind is NodeKind.GEOMETRY else None
        attrs = tuple(("k", v) for v in attr_pool if rng.random() < 0.25)
        card = Cardinality.ONE if root or rng.random() < 0.65 else Cardinality.ANY
        kids = []
        if kind.group_like:
            while budget[0] > 0 and rng.random() < 0.75:
                kids.append(make(depth + 1, False))
        return StructurePattern(kind, shape, attrs, card, tuple(kids))

    return make(0, True)


def pattern_from_graph(rng: random.Random, graph, anchor: int, max_nodes: int = 5) -> StructurePattern:
    """Sample a pattern from the subgraph below ``anchor`` and perturb it.

    Unperturbed samples always match; random cardinality flips, extra
    attributes and kind swaps produce near misses.
    """
    budget = [rng.randint(1, max_nodes)]

    def make(node: int, root: bool) -> StructurePattern:
        budget[0] -= 1
        kind = graph.kind(node)
        shape = graph.shape_kind(node)
        attrs = tuple(a for a in graph.attributes(node) if rng.random() < 0.7)
        if rng.random() < 0.08:
            attrs += (("k", rng.choice("abc")),)
        if rng.random() < 0.05:
            kind, shape = rng.choice([(NodeKind.GROUP, None), (NodeKind.TRANSFORM, None), (NodeKind.NODE, None)])
        card = Cardinality.ONE if root or rng.random() < 0.7 else Cardinality.ANY
        kids = []
        if kind.group_like:
            children = list(graph.children(node)) if graph.kind(node).group_like else []
            rng.shuffle(children)
            for c in children:
                if budget[0] <= 0 or rng.random() < 0.2:
                    break
                kids.append(make(c, False))
        return StructurePattern(kind, shape, tuple(dict.fromkeys(attrs)), card, tuple(kids))

    return make(anchor, True)


__all__ = [
    "pattern_from_graph",
    "CORPUS",
    "assert_isomorphic",
    "correspondence",
    "hom",
    "one_closure",
    "one_part",
    "oracle_accepts",
    "oracle_embedding",
    "oracle_ns",
    "oracle_si",
    "orthonormalize",
    "random_ast",
    "random_pattern",
    "random_rotation",
    "random_valid_model",
]
