"""Name resolution, validation and structure patterns."""

from rsgdsl.sem.patterns import (
    Compatibility,
    MatchResult,
    Snapshot,
    StructurePattern,
    check_block_compatibility,
    match_pattern,
    pattern_compatible,
    to_pattern,
)
from rsgdsl.sem.resolve import SymbolTable, resolve
from rsgdsl.sem.validate import ValidatedModel, validate

__all__ = [
    "Compatibility",
    "MatchResult",
    "Snapshot",
    "StructurePattern",
    "SymbolTable",
    "ValidatedModel",
    "check_block_compatibility",
    "match_pattern",
    "pattern_compatible",
    "resolve",
    "to_pattern",
    "validate",
]
