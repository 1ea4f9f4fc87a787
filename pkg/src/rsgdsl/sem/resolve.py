"""Name resolution over a parsed model."""

from __future__ import annotations

from dataclasses import dataclass

from rsgdsl.diagnostics import Diagnostic, ResolveError, error
from rsgdsl.syntax.nodes import (
    NODE_DECL_TYPES,
    Decl,
    FunctionBlockDecl,
    GeometricNodeDecl,
    MeshDecl,
    MeshTypeDecl,
    NodeLikeDecl,
    PointCloudDecl,
    PointCloudTypeDecl,
    Ref,
    SourceModel,
    is_node_decl,
)


@dataclass
class SymbolTable:
    decls: dict[str, Decl]
    root_name: str

    def __getitem__(self, name: str) -> Decl:
        return self.decls[name]

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def node(self, name: str) -> NodeLikeDecl:
        decl = self.decls[name]
        if not is_node_decl(decl):
            raise KeyError(f"{name!r} is not a node declaration")
        return decl


def _kind_name(decl: Decl) -> str:
    return type(decl).__name__.removesuffix("Decl")


def resolve(model: SourceModel) -> SymbolTable:
    """Build the symbol table and check that every reference resolves.

    All problems are collected; :class:`ResolveError` is raised if any
    were found.
    """
    diags: list[Diagnostic] = []
    decls: dict[str, Decl] = {}
    for decl in model.declarations:
        if decl.name in decls:
            diags.append(
                error(
                    decl.pos.line,
                    decl.pos.column,
                    f"duplicate declaration name {decl.name!r}",
                    "DUPLICATE_NAME",
                )
            )
        else:
            decls[decl.name] = decl

    def check(ref: Ref, wanted: tuple[type, ...], what: str) -> None:
        target = decls.get(ref.name)
        if target is None:
            diags.append(
                error(ref.pos.line, ref.pos.column, f"undefined name {ref.name!r}", "UNDEFINED_NAME")
            )
        elif not isinstance(target, wanted):
            diags.append(
                error(
                    ref.pos.line,
                    ref.pos.column,
                    f"{ref.name!r} is a {_kind_name(target)}, expected {what}",
                    "WRONG_REFERENCE_KIND",
                )
            )

    node_types = NODE_DECL_TYPES
    for decl in model.declarations:
        if is_node_decl(decl):
            for child in decl.props.children:
                check(child, node_types, "a node declaration")
            if isinstance(decl, GeometricNodeDecl):
                if isinstance(decl.shape, PointCloudDecl):
                    check(decl.shape.type_ref, (PointCloudTypeDecl,), "a PointCloudType")
                elif isinstance(decl.shape, MeshDecl):
                    check(decl.shape.type_ref, (MeshTypeDecl,), "a MeshType")
        elif isinstance(decl, FunctionBlockDecl):
            for _key, ref in decl.references():
                check(ref, node_types, "a node declaration")

    root = model.root
    root_decl = decls.get(root.name)
    if root_decl is None:
        diags.append(
            error(root.pos.line, root.pos.column, f"undefined name {root.name!r}", "UNDEFINED_NAME")
        )
    elif not (is_node_decl(root_decl) and root_decl.kind.group_like):
        diags.append(
            error(
                root.pos.line,
                root.pos.column,
                f"root {root.name!r} must be a Group or Transform, not a {_kind_name(root_decl)}",
                "ROOT_NOT_GROUPLIKE",
            )
        )
    if diags:
        raise ResolveError(diags)
    return SymbolTable(decls, root.name)
