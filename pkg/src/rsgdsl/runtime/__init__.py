"""Executable scene graph, transform caches and function-block execution."""

from rsgdsl.rigid import HomMatrix
from rsgdsl.runtime.blocks import (
    BlockExecutionError,
    BlockInput,
    BlockRegistry,
    ExecutionReport,
    FunctionBlockInstance,
    execute_function_block,
    instantiate_block,
)
from rsgdsl.runtime.cache import TransformCache
from rsgdsl.runtime.instructions import Instruction, Op, apply_instructions
from rsgdsl.runtime.segmentation import default_registry
from rsgdsl.runtime.shapes import Box, Cylinder, Mesh, PointCloud
from rsgdsl.runtime.world import LATEST, ROOT_ID, Latest, SceneGraphError, Tagged, WorldModel

__all__ = [
    "LATEST",
    "ROOT_ID",
    "BlockExecutionError",
    "BlockInput",
    "BlockRegistry",
    "Box",
    "Cylinder",
    "ExecutionReport",
    "FunctionBlockInstance",
    "HomMatrix",
    "Instruction",
    "Latest",
    "Mesh",
    "Op",
    "PointCloud",
    "SceneGraphError",
    "Tagged",
    "TransformCache",
    "WorldModel",
    "apply_instructions",
    "default_registry",
    "execute_function_block",
    "instantiate_block",
]
