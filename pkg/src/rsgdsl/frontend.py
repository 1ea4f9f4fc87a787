"""Parse, resolve and validate in one call."""

from __future__ import annotations

from pathlib import Path

from rsgdsl.diagnostics import Diagnostic, DiagnosticError
from rsgdsl.sem.resolve import resolve
from rsgdsl.sem.validate import DEFAULT_WINDOW_NS, ValidatedModel, validate
from rsgdsl.syntax.parser import parse


def check_source(
    text: str, window_ns: int = DEFAULT_WINDOW_NS
) -> tuple[ValidatedModel | None, list[Diagnostic]]:
    """Run every front-end phase; returns the model (None on error) and all diagnostics."""
    try:
        model = parse(text)
        symbols = resolve(model)
        vm = validate(model, symbols, window_ns)
    except DiagnosticError as exc:
        return None, exc.diagnostics
    return vm, list(vm.warnings)


def load_model(path: str | Path, window_ns: int = DEFAULT_WINDOW_NS) -> ValidatedModel:
    """Read and validate an ``.rsg`` file, raising :class:`DiagnosticError` on errors."""
    text = Path(path).read_text(encoding="utf-8")
    vm, diags = check_source(text, window_ns)
    if vm is None:
        raise DiagnosticError(diags)
    return vm
