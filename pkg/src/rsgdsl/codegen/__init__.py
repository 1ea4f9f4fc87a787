from rsgdsl.codegen.dot import emit_dot, emit_model_dot
from rsgdsl.codegen.setup import (
    CodegenError,
    PrimitiveOrder,
    SetupProgram,
    emit_setup_program,
    load_setup_program,
    order_primitives,
    write_setup_program,
)
from rsgdsl.codegen.stubs import BACKENDS, StubSpec, emit_block_stub, stub_spec, write_block_stub

__all__ = [
    "BACKENDS",
    "CodegenError",
    "PrimitiveOrder",
    "SetupProgram",
    "StubSpec",
    "emit_block_stub",
    "emit_dot",
    "emit_model_dot",
    "emit_setup_program",
    "load_setup_program",
    "order_primitives",
    "stub_spec",
    "write_block_stub",
    "write_setup_program",
]
