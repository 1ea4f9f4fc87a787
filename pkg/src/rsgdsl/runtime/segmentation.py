"""Built-in demo block: split a point cloud into horizontal slabs.

Points are binned on z with a fixed bin height; a slab is a maximal run of
adjacent non-empty bins. Each slab becomes a Transform at the slab centroid
holding a PointCloud of the slab points expressed relative to that centroid.
This stands in for a real plane segmentation and is easy to check by hand.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from rsgdsl.rigid import HomMatrix
from rsgdsl.runtime.blocks import OUTPUT_HOOK_VAR, BlockInput, BlockRegistry
from rsgdsl.runtime.instructions import Instruction, add_geometry, add_group, add_transform
from rsgdsl.runtime.shapes import PointCloud, Vec3

BLOCK_NAME = "horizontalPlaneSegmentation"
BIN_HEIGHT = 0.05


def segment_slabs(points: Iterable[Vec3], bin_height: float = BIN_HEIGHT) -> list[list[Vec3]]:
    """Group points into z-slabs, lowest first."""
    bins: dict[int, list[Vec3]] = defaultdict(list)
    for p in points:
        bins[math.floor(p[2] / bin_height)].append(p)
    slabs: list[list[Vec3]] = []
    previous = None
    for key in sorted(bins):
        if previous is None or key != previous + 1:
            slabs.append([])
        slabs[-1].extend(bins[key])
        previous = key
    return slabs


def centroid(points: Sequence[Vec3]) -> Vec3:
    n = len(points)
    return tuple(math.fsum(p[axis] for p in points) / n for axis in range(3))


def horizontal_plane_segmentation(inp: BlockInput) -> list[Instruction]:
    cloud = inp.world.shape(inp.anchor)
    if not isinstance(cloud, PointCloud):
        raise TypeError(f"input [{inp.anchor}] is not a point cloud")
    out = [add_group("planes", OUTPUT_HOOK_VAR, [("name", "planes")])]
    for i, slab in enumerate(segment_slabs(cloud.points)):
        c = centroid(slab)
        local = [(x - c[0], y - c[1], z - c[2]) for x, y, z in slab]
        tf_var, cloud_var = f"plane{i}Tf", f"plane{i}Cloud"
        out.append(
            add_transform(
                tf_var,
                "planes",
                [("name", f"plane_{i}")],
                [(inp.stamp, HomMatrix.translation_only(*c))],
            )
        )
        out.append(
            add_geometry(
                cloud_var,
                tf_var,
                [("name", f"plane_{i}_points")],
                PointCloud(cloud.type_name, tuple(local)),
                inp.stamp,
            )
        )
    return out


def register_builtins(registry: BlockRegistry) -> BlockRegistry:
    registry.register(BLOCK_NAME, horizontal_plane_segmentation)
    return registry


def default_registry() -> BlockRegistry:
    return register_builtins(BlockRegistry())
