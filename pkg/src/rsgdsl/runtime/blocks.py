"""Function blocks: host-registered computations over a bound subgraph.

A block names where its input lives (input hook), what the input must look
like (input pattern), where results go (output hook) and what it promises to
create (output pattern). Execution is atomic: a failed run leaves the world
model exactly as it was.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from rsgdsl.sem.patterns import MatchResult, StructurePattern, match_pattern, to_pattern
from rsgdsl.sem.validate import ValidatedModel
from rsgdsl.runtime.instructions import Instruction, Op, apply_instructions
from rsgdsl.runtime.world import Attr, SceneGraphError, WorldModel

# Reserved variable names visible to block bodies.
OUTPUT_HOOK_VAR = "$output"
INPUT_ANCHOR_VAR = "$input"

Hook = Union[int, Sequence[Attr]]


@dataclass
class BlockInput:
    world: WorldModel
    anchor: int
    match: MatchResult
    output_hook: int
    stamp: int


Body = Callable[[BlockInput], Sequence[Instruction]]


@dataclass
class FunctionBlockInstance:
    name: str
    input_hook: Hook
    output_hook: Hook
    input_pattern: StructurePattern
    output_pattern: StructurePattern
    body: Body


@dataclass
class ExecutionReport:
    block: str
    ok: bool = False
    code: str = ""
    message: str = ""
    anchor: int | None = None
    output_hook: int | None = None
    input_bindings: dict = field(default_factory=dict)
    output_bindings: dict = field(default_factory=dict)
    created: dict[str, int] = field(default_factory=dict)
    output_verified: bool = False

    def summary(self) -> str:
        if self.ok:
            return (
                f"{self.block}: ok, anchor [{self.anchor}], "
                f"{len(self.created)} nodes created under [{self.output_hook}]"
            )
        return f"{self.block}: {self.code}: {self.message}"


class BlockExecutionError(SceneGraphError):
    def __init__(self, report: ExecutionReport):
        super().__init__(report.code, f"{report.block}: {report.message}")
        self.report = report


def _resolve_hook(world: WorldModel, hook: Hook, which: str) -> int:
    if isinstance(hook, int):
        if hook not in world:
            raise SceneGraphError("HOOK_UNRESOLVED", f"{which} hook [{hook}] does not exist")
        return hook
    found = world.find_nodes(hook)
    if not found:
        raise SceneGraphError("HOOK_UNRESOLVED", f"{which} hook query {list(hook)} matches nothing")
    if len(found) > 1:
        raise SceneGraphError(
            "HOOK_AMBIGUOUS", f"{which} hook query {list(hook)} matches nodes {found}"
        )
    return found[0]


def execute_function_block(
    world: WorldModel, block: FunctionBlockInstance, stamp: int = 0
) -> ExecutionReport:
    """Resolve hooks, match the input, run the body, apply and verify its output.

    Returns the report on success and raises :class:`BlockExecutionError`
    (carrying the report) otherwise.
    """
    report = ExecutionReport(block.name)

    def fail(code: str, message: str) -> BlockExecutionError:
        report.code, report.message = code, message
        return BlockExecutionError(report)

    try:
        anchor = _resolve_hook(world, block.input_hook, "input")
        out_hook = _resolve_hook(world, block.output_hook, "output")
    except SceneGraphError as exc:
        raise fail(exc.code, str(exc)) from None
    report.anchor, report.output_hook = anchor, out_hook
    if not world.kind(out_hook).group_like:
        raise fail("HOOK_UNRESOLVED", f"output hook [{out_hook}] is not a Group or Transform")

    with world.transaction():
        found = match_pattern(block.input_pattern, world, anchor)
        if not found:
            raise fail("INPUT_MISMATCH", found.reason)
        report.input_bindings = found.bindings

        try:
            instructions = list(block.body(BlockInput(world, anchor, found, out_hook, stamp)))
            env = {OUTPUT_HOOK_VAR: out_hook, INPUT_ANCHOR_VAR: anchor}
            report.created = apply_instructions(world, instructions, env)
        except Exception as exc:  # body code is untrusted
            raise fail("BODY_ERROR", f"{type(exc).__name__}: {exc}") from exc

        tops = [
            report.created[ins.var]
            for ins in instructions
            if ins.op is not Op.ADD_PARENT and ins.parent_var == OUTPUT_HOOK_VAR
        ]
        if len(tops) != 1:
            raise fail(
                "OUTPUT_MISMATCH",
                f"expected one node created under the output hook, got {len(tops)}",
            )
        produced = match_pattern(block.output_pattern, world, tops[0])
        if not produced:
            raise fail("OUTPUT_MISMATCH", produced.reason)
        stray = sorted(set(report.created.values()) - produced.bound_ids())
        if stray:
            raise fail("OUTPUT_MISMATCH", f"created nodes {stray} are not described by the output structure")
        report.output_bindings = produced.bindings
    report.ok = report.output_verified = True
    return report


class BlockRegistry:
    """Maps block names to bodies; bodies run in-process."""

    def __init__(self) -> None:
        self._bodies: dict[str, Body] = {}

    def register(self, name: str, body: Body | None = None):
        if body is None:
            return lambda fn: self.register(name, fn)
        self._bodies[name] = body
        return body

    def get(self, name: str) -> Body:
        try:
            return self._bodies[name]
        except KeyError:
            raise KeyError(f"no body registered for block {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._bodies

    def names(self) -> list[str]:
        return sorted(self._bodies)


def hook_query(model: ValidatedModel, name: str) -> tuple[Attr, ...]:
    return tuple(a.pair() for a in model.node(name).props.attributes)


def instantiate_block(
    model: ValidatedModel,
    block_name: str,
    body: Body,
    name_map: Mapping[str, int] | None = None,
) -> FunctionBlockInstance:
    """Bind a declared block to a body.

    Hooks naming a node in ``name_map`` (typically the result of loading the
    setup program) become node ids; other hooks become attribute queries.
    """
    decl = model.block(block_name)
    name_map = name_map or {}

    def hook(name: str) -> Hook:
        return name_map[name] if name in name_map else hook_query(model, name)

    return FunctionBlockInstance(
        name=decl.name,
        input_hook=hook(decl.input_hook.name),
        output_hook=hook(decl.output_hook.name),
        input_pattern=to_pattern(decl.input_structure.name, model),
        output_pattern=to_pattern(decl.output_structure.name, model),
        body=body,
    )
