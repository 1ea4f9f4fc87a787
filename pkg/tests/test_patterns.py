from __future__ import annotations

import random

import pytest

from helpers import CORPUS, random_pattern
from rsgdsl.frontend import check_source, load_model
from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind
from rsgdsl.rigid import HomMatrix
from rsgdsl.runtime import Box, PointCloud, WorldModel
from rsgdsl.sem.patterns import (
    StructurePattern,
    check_block_compatibility,
    match_pattern,
    one_closure,
    pattern_compatible,
    to_pattern,
)

CLOUD = StructurePattern(NodeKind.GEOMETRY, ShapeKind.POINT_CLOUD)
PLANES = StructurePattern(
    NodeKind.GROUP,
    children=(StructurePattern(NodeKind.TRANSFORM, cardinality=Cardinality.ANY, children=(CLOUD,)),),
)


def planes_world(pairs: int, extra_box: bool = False) -> tuple[WorldModel, int]:
    world = WorldModel()
    group = world.add_group(world.root_id)
    for _ in range(pairs):
        tf = world.add_transform_node(group, (), HomMatrix(), 0)
        world.add_geometric_node(tf, (), PointCloud("T", ((0.0, 0.0, 0.0),)), 0)
    if extra_box:
        world.add_geometric_node(group, (), Box(1, 1, 1), 0)
    return world, group


def test_pattern_rejects_bad_shapes():
    with pytest.raises(ValueError):
        StructurePattern(NodeKind.GEOMETRY)
    with pytest.raises(ValueError):
        StructurePattern(NodeKind.GROUP, ShapeKind.BOX)
    with pytest.raises(ValueError):
        StructurePattern(NodeKind.NODE, children=(CLOUD,))


def test_to_pattern_from_corpus():
    vm = load_model(CORPUS / "horizontal_plane_segmentation.rsg")
    assert to_pattern("inputCloud", vm) == CLOUD
    planes = to_pattern("planes", vm)
    assert planes.kind is NodeKind.GROUP and planes.attributes == (("name", "planes"),)
    (tf,) = planes.children
    assert tf.cardinality is Cardinality.ANY and tf.children == (CLOUD,)
    assert planes.size() == 3


def test_to_pattern_duplicates_shared_subtrees():
    vm, _ = check_source(
        "root r Group r { children { a b } } Group a { children { c } } Group b { children { c } } Node c { }"
    )
    p = to_pattern("r", vm)
    assert [c.children[0].name for c in p.children] == ["c", "c"]
    assert p.size() == 5


def test_single_node_match():
    world = WorldModel()
    cloud = world.add_geometric_node(world.root_id, (), PointCloud("T", ()), 0)
    result = match_pattern(CLOUD, world, cloud)
    assert result and result.bindings == {(): [cloud]}


def test_any_binds_all_pairs():
    world, group = planes_world(3)
    result = match_pattern(PLANES, world, group)
    assert result
    assert len(result.bound((0,))) == 3
    assert len(result.bound((0, 0))) == 3
    assert result.bound_ids() == set(world.node_ids()) - {world.root_id}


def test_any_may_bind_nothing():
    world, group = planes_world(0)
    result = match_pattern(PLANES, world, group)
    assert result and result.bound((0,)) == []


def test_kind_mismatch_is_reported():
    world, group = planes_world(0, extra_box=True)
    (box,) = world.children(group)
    result = match_pattern(CLOUD, world, box)
    assert not result and "does not match" in result.reason


def test_one_children_need_distinct_nodes():
    pattern = StructurePattern(NodeKind.GROUP, children=(CLOUD, CLOUD))
    world = WorldModel()
    group = world.add_group(world.root_id)
    world.add_geometric_node(group, (), PointCloud("T", ()), 0)
    assert not match_pattern(pattern, world, group)
    world.add_geometric_node(group, (), PointCloud("T", ()), 0)
    assert match_pattern(pattern, world, group)


def test_one_assignment_backtracks():
    # Greedy choice of the first group for the plain child would starve the
    # child that needs the cloud below it.
    needs_cloud = StructurePattern(NodeKind.GROUP, children=(CLOUD,))
    pattern = StructurePattern(NodeKind.GROUP, children=(StructurePattern(NodeKind.GROUP), needs_cloud))
    world = WorldModel()
    top = world.add_group(world.root_id)
    with_cloud = world.add_group(top)
    world.add_group(top)
    world.add_geometric_node(with_cloud, (), PointCloud("T", ()), 0)
    result = match_pattern(pattern, world, top)
    assert result
    assert result.bound((1,)) == [with_cloud]


def test_attribute_subset():
    world = WorldModel()
    g = world.add_group(world.root_id, [("name", "planes"), ("frame", "x")])
    assert match_pattern(StructurePattern(NodeKind.GROUP, attributes=(("name", "planes"),)), world, g)
    assert not match_pattern(StructurePattern(NodeKind.GROUP, attributes=(("name", "other"),)), world, g)


def test_one_closure_skips_any():
    closure = one_closure(PLANES)
    assert [path for path, _p, _parent in closure] == [()]


def test_compatibility_examples():
    one_tf = StructurePattern(NodeKind.GROUP, children=(StructurePattern(NodeKind.TRANSFORM, children=(CLOUD,)),))
    assert pattern_compatible(PLANES, PLANES)
    assert pattern_compatible(one_tf, PLANES)
    verdict = pattern_compatible(PLANES, one_tf)
    assert not verdict
    assert verdict.explanation == "GROUP/TRANSFORM: cardinality ANY cannot satisfy ONE"
    tagged = StructurePattern(NodeKind.GROUP, attributes=(("name", "planes"),))
    assert not pattern_compatible(StructurePattern(NodeKind.GROUP), tagged)
    assert pattern_compatible(tagged, StructurePattern(NodeKind.GROUP))


def test_block_compatibility_from_model():
    vm = load_model(CORPUS / "horizontal_plane_segmentation.rsg")
    (block,) = vm.blocks
    verdict = check_block_compatibility(block, block, vm)
    assert not verdict and "cannot satisfy GEOMETRY(POINT_CLOUD)" in verdict.explanation


def instantiate(pattern: StructurePattern, world: WorldModel, parent: int, rng: random.Random) -> int:
    """Build one concrete instance of ``pattern`` below ``parent``."""
    attrs = list(pattern.attributes)
    if pattern.kind is NodeKind.GROUP:
        node = world.add_group(parent, attrs)
    elif pattern.kind is NodeKind.TRANSFORM:
        node = world.add_transform_node(parent, attrs, HomMatrix(), 0)
    elif pattern.kind is NodeKind.NODE:
        return world.add_node(parent, attrs)
    else:
        shape = Box(1, 1, 1) if pattern.shape is ShapeKind.BOX else PointCloud("T", ())
        return world.add_geometric_node(parent, attrs, shape, 0)
    for child in pattern.children:
        copies = rng.randint(0, 3) if child.cardinality is Cardinality.ANY else 1
        for _ in range(copies):
            instantiate(child, world, node, rng)
    return node


def test_compatibility_is_sound_on_sampled_instances():
    rng = random.Random(5)
    checked = 0
    for _ in range(400):
        producer, consumer = random_pattern(rng), random_pattern(rng)
        if rng.random() < 0.5:
            consumer = StructurePattern(
                producer.kind, producer.shape, producer.attributes[:1], Cardinality.ONE,
                tuple(c for c in producer.children if rng.random() < 0.6),
            )
        if not pattern_compatible(producer, consumer):
            continue
        for _ in range(5):
            world = WorldModel()
            anchor = instantiate(producer, world, world.root_id, rng)
            assert match_pattern(consumer, world, anchor), (producer, consumer)
            checked += 1
    assert checked >= 500
