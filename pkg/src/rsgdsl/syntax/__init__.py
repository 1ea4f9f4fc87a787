"""Concrete syntax of ``.rsg`` files: tokens, syntax tree, parser, printer."""

from rsgdsl.syntax.nodes import SourceModel
from rsgdsl.syntax.parser import parse
from rsgdsl.syntax.printer import pretty_print

__all__ = ["SourceModel", "parse", "pretty_print"]
