"""Graphviz dot export of a scene graph.

Each scene node becomes one dot node labelled with its runtime id in square
brackets and its attributes. Transforms are filled yellow and additionally
show their latest translation and cache size; geometric nodes are green.
"""

from __future__ import annotations

import json
from typing import Mapping

from rsgdsl.kinds import NodeKind
from rsgdsl.runtime.world import WorldModel
from rsgdsl.sem.validate import ValidatedModel

TRANSFORM_FILL = "yellow"
GEOMETRY_FILL = "green"


def _num(value: float) -> str:
    text = f"{value:.6g}"
    return "0" if text == "-0" else text


def _quote(text: str) -> str:
    # json escaping is also valid dot string escaping for these characters
    return json.dumps(text, ensure_ascii=False)


def _label(node: Mapping) -> str:
    lines = [f"[{node['id']}]"]
    attrs = ", ".join(f"{k} = {v}" for k, v in node["attributes"])
    lines.append(f"({attrs})")
    cache = node.get("cache")
    if cache:
        x, y, z = cache[-1]["translation"]
        lines.append(f"T = ({_num(x)}, {_num(y)}, {_num(z)})")
        lines.append(f"Updates: {len(cache)}")
    return "\n".join(lines)


def emit_dot(graph: WorldModel | Mapping, name: str = "scene") -> str:
    """Render a world model, or its ``to_json`` snapshot, as dot text."""
    snapshot = graph.to_json() if isinstance(graph, WorldModel) else graph
    nodes = sorted(snapshot["nodes"], key=lambda n: n["id"])
    out = [f"digraph {_quote(name)} {{", "  node [shape=box];"]
    for node in nodes:
        style = ""
        if node["kind"] == NodeKind.TRANSFORM.value:
            style = f', style=filled, fillcolor="{TRANSFORM_FILL}"'
        elif node["kind"] == NodeKind.GEOMETRY.value:
            style = f', style=filled, fillcolor="{GEOMETRY_FILL}"'
        out.append(f"  n{node['id']} [label={_quote(_label(node))}{style}];")
    for node in nodes:
        for child in node["children"]:
            out.append(f"  n{node['id']} -> n{child};")
    out.append("}")
    return "\n".join(out) + "\n"


def emit_model_dot(model: ValidatedModel, name: str = "scene") -> str:
    """Load ``model`` into a fresh runtime and render the result."""
    from rsgdsl.codegen.setup import emit_setup_program, load_setup_program

    world = WorldModel()
    load_setup_program(emit_setup_program(model), world)
    return emit_dot(world, name)
