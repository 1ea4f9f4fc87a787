"""Toolchain for the Robot Scene Graph DSL.

Parse ``.rsg`` world-model descriptions, validate them, run them in an
in-process scene graph and generate setup programs and block interfaces.
"""

from rsgdsl.diagnostics import Diagnostic, DiagnosticError, Severity
from rsgdsl.frontend import check_source, load_model
from rsgdsl.kinds import Cardinality, NodeKind, ShapeKind

__version__ = "0.1.0"

__all__ = [
    "Cardinality",
    "Diagnostic",
    "DiagnosticError",
    "NodeKind",
    "Severity",
    "ShapeKind",
    "check_source",
    "load_model",
]
