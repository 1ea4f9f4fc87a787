"""Recursive-descent parser producing a :class:`SourceModel`.

Grammar outline (``?`` optional, ``*`` repetition; sections inside a
declaration body may appear in any order but at most once)::

    file      := ('root' IDENT | decl)*
    decl      := 'Node' IDENT '{' common* '}'
               | 'Group' IDENT '{' (common | children)* '}'
               | 'Transform' IDENT '{' (common | children | cache)* '}'
               | 'GeometricNode' IDENT '{' (common | 'shape' shape | 'stamp' qty)* '}'
               | 'FunctionBlock' IDENT '{' hook-section{4} '}'
               | ('PointCloudType' | 'MeshType') IDENT '{' 'type' STRING ('header' STRING)? '}'
    common    := 'attributes' '{' (STRING '=' STRING)* '}' | 'cardinality' ('*' | '1')
    children  := 'children' '{' IDENT* '}'
    cache     := 'cache' '{' ('transform' '{' 'rotation' '[' NUMBER{9} ']'
                                           'translation' point 'stamp' qty '}')+ '}'
    point     := '(' qty ',' qty ',' qty ')'
    qty       := NUMBER UNIT
"""

from __future__ import annotations

from rsgdsl.diagnostics import ParseError, error
from rsgdsl.kinds import Cardinality
from rsgdsl.syntax.lexer import Tok, Token, tokenize
from rsgdsl.syntax.nodes import (
    Attribute,
    BoxDecl,
    CylinderDecl,
    Decl,
    FunctionBlockDecl,
    GeometricNodeDecl,
    GeometryDecl,
    GroupDecl,
    MeshDecl,
    MeshTypeDecl,
    NodeDecl,
    NodeProps,
    Point,
    PointCloudDecl,
    PointCloudTypeDecl,
    Pos,
    QuantityDecl,
    Ref,
    RigidTransformDecl,
    SourceModel,
    TransformDecl,
)
from rsgdsl.units import UNIT_SYMBOLS

_HOOK_SECTIONS = ("inputHook", "inputStructure", "outputHook", "outputStructure")


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    # -- token helpers -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.type is not Tok.EOF:
            self.i += 1
        return tok

    def fail(self, message: str, tok: Token | None = None, code: str = "SYNTAX"):
        tok = tok or self.tok
        raise ParseError([error(tok.line, tok.column, message, code)])

    def at_punct(self, text: str) -> bool:
        return self.tok.type is Tok.PUNCT and self.tok.text == text

    def at_word(self, text: str) -> bool:
        return self.tok.type in (Tok.IDENT, Tok.KEYWORD) and self.tok.text == text

    def expect_punct(self, text: str) -> Token:
        if not self.at_punct(text):
            self.fail(f"expected '{text}', found {self.tok.describe()}")
        return self.advance()

    def expect_word(self, text: str) -> Token:
        if not self.at_word(text):
            self.fail(f"expected '{text}', found {self.tok.describe()}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.type is not Tok.IDENT:
            self.fail(f"expected {what}, found {self.tok.describe()}")
        return self.advance()

    def expect_string(self) -> str:
        if self.tok.type is not Tok.STRING:
            self.fail(f"expected string literal, found {self.tok.describe()}")
        return self.advance().value

    def expect_number(self) -> float:
        if self.tok.type is not Tok.NUMBER:
            self.fail(f"expected number, found {self.tok.describe()}")
        return self.advance().value

    def ref(self, what: str = "name") -> Ref:
        tok = self.expect_ident(what)
        return Ref(tok.text, Pos(tok.line, tok.column))

    # -- top level -----------------------------------------------------

    def parse_file(self) -> SourceModel:
        decls: list[Decl] = []
        root: Ref | None = None
        while self.tok.type is not Tok.EOF:
            if self.at_word("root"):
                kw = self.advance()
                ref = self.ref("root node name")
                if root is not None:
                    self.fail("duplicate root designation", kw, "DUPLICATE_ROOT")
                root = ref
                continue
            decls.append(self.decl())
        if root is None:
            first = self.tokens[0]
            line, col = (1, 1) if first.type is Tok.EOF else (first.line, first.column)
            raise ParseError([error(line, col, "missing root designation", "MISSING_ROOT")])
        return SourceModel(decls, root)

    def decl(self) -> Decl:
        tok = self.tok
        if tok.type is not Tok.KEYWORD:
            self.fail(f"expected a declaration keyword, found {tok.describe()}")
        parsers = {
            "Node": self.node_decl,
            "Group": self.group_decl,
            "Transform": self.transform_decl,
            "GeometricNode": self.geometric_decl,
            "FunctionBlock": self.block_decl,
            "PointCloudType": self.host_type_decl,
            "MeshType": self.host_type_decl,
        }
        parse = parsers.get(tok.text)
        if parse is None:
            self.fail(f"'{tok.text}' cannot start a declaration")
        self.advance()
        name = self.expect_ident("declaration name")
        pos = Pos(tok.line, tok.column)
        self.expect_punct("{")
        result = parse(tok.text, name.text, pos)
        self.expect_punct("}")
        return result

    def sections(self, allowed: dict) -> set[str]:
        """Parse body sections in any order, each handler at most once."""
        seen: set[str] = set()
        while not self.at_punct("}"):
            tok = self.tok
            handler = allowed.get(tok.text) if tok.type in (Tok.IDENT, Tok.KEYWORD) else None
            if handler is None and tok.text == "children":
                self.fail(
                    "children are only allowed on Group and Transform declarations",
                    tok,
                    "CHILD_ON_LEAF",
                )
            if handler is None:
                expected = ", ".join(f"'{k}'" for k in allowed)
                self.fail(f"unexpected {tok.describe()}; expected one of {expected} or '}}'")
            if tok.text in seen:
                self.fail(f"duplicate '{tok.text}' section", tok)
            seen.add(tok.text)
            self.advance()
            handler()
        return seen

    def _common(self, props: NodeProps) -> dict:
        def attributes() -> None:
            self.expect_punct("{")
            while not self.at_punct("}"):
                tok = self.tok
                key = self.expect_string()
                if not key:
                    self.fail("attribute key must not be empty", tok)
                self.expect_punct("=")
                value = self.expect_string()
                props.attributes.append(Attribute(key, value, Pos(tok.line, tok.column)))
            self.advance()

        def cardinality() -> None:
            if self.at_punct("*"):
                self.advance()
                props.cardinality = Cardinality.ANY
            elif self.tok.type is Tok.NUMBER and self.tok.value == 1:
                self.advance()
                props.cardinality = Cardinality.ONE
            else:
                self.fail(f"expected '*' or 1 after 'cardinality', found {self.tok.describe()}")

        return {"attributes": attributes, "cardinality": cardinality}

    def _children(self, props: NodeProps):
        def children() -> None:
            self.expect_punct("{")
            while not self.at_punct("}"):
                props.children.append(self.ref("child name"))
            self.advance()

        return children

    # -- node declarations ---------------------------------------------

    def node_decl(self, _kw: str, name: str, pos: Pos) -> NodeDecl:
        props = NodeProps()
        self.sections(self._common(props))
        return NodeDecl(name, props, pos)

    def group_decl(self, _kw: str, name: str, pos: Pos) -> GroupDecl:
        props = NodeProps()
        self.sections({**self._common(props), "children": self._children(props)})
        return GroupDecl(name, props, pos)

    def transform_decl(self, _kw: str, name: str, pos: Pos) -> TransformDecl:
        props = NodeProps()
        cache: list[RigidTransformDecl] = []

        def cache_section() -> None:
            self.expect_punct("{")
            while not self.at_punct("}"):
                cache.append(self.rigid_transform())
            if not cache:
                self.fail("transform cache needs at least one entry")
            self.advance()

        seen = self.sections(
            {**self._common(props), "children": self._children(props), "cache": cache_section}
        )
        if "cache" not in seen:
            self.fail(f"Transform '{name}' requires a 'cache' section")
        return TransformDecl(name, props, cache, pos)

    def rigid_transform(self) -> RigidTransformDecl:
        tok = self.expect_word("transform")
        self.expect_punct("{")
        self.expect_word("rotation")
        self.expect_punct("[")
        rotation: list[float] = []
        while not self.at_punct("]"):
            if rotation and self.at_punct(","):
                self.advance()
            rotation.append(self.expect_number())
        if len(rotation) != 9:
            self.fail(f"rotation needs 9 entries, found {len(rotation)}")
        self.advance()
        self.expect_word("translation")
        translation = self.point()
        self.expect_word("stamp")
        stamp = self.quantity()
        self.expect_punct("}")
        return RigidTransformDecl(tuple(rotation), translation, stamp, Pos(tok.line, tok.column))

    def geometric_decl(self, _kw: str, name: str, pos: Pos) -> GeometricNodeDecl:
        props = NodeProps()
        found: dict = {}

        def shape() -> None:
            found["shape"] = self.shape()

        def stamp() -> None:
            found["stamp"] = self.quantity()

        self.sections({**self._common(props), "shape": shape, "stamp": stamp})
        if "shape" not in found:
            self.fail(f"GeometricNode '{name}' requires a 'shape' section")
        return GeometricNodeDecl(name, found["shape"], props, found.get("stamp"), pos)

    def shape(self) -> GeometryDecl:
        tok = self.tok
        if tok.type is not Tok.KEYWORD or tok.text not in ("Box", "Cylinder", "PointCloud", "Mesh"):
            self.fail(f"expected Box, Cylinder, PointCloud or Mesh, found {tok.describe()}")
        self.advance()
        self.expect_punct("{")
        if tok.text == "Box":
            dims = [self._named_quantity(k) for k in ("x", "y", "z")]
            result: GeometryDecl = BoxDecl(*dims)
        elif tok.text == "Cylinder":
            result = CylinderDecl(self._named_quantity("radius"), self._named_quantity("height"))
        elif tok.text == "PointCloud":
            self.expect_word("type")
            type_ref = self.ref("point cloud type name")
            points: list[Point] = []
            if self.at_word("points"):
                self.advance()
                points = self._list(self.point)
            result = PointCloudDecl(type_ref, points)
        else:
            self.expect_word("type")
            type_ref = self.ref("mesh type name")
            triangles = []
            if self.at_word("triangles"):
                self.advance()
                triangles = self._list(self.triangle)
            result = MeshDecl(type_ref, triangles)
        self.expect_punct("}")
        return result

    def _named_quantity(self, word: str) -> QuantityDecl:
        self.expect_word(word)
        return self.quantity()

    def _list(self, item):
        self.expect_punct("[")
        items = []
        while not self.at_punct("]"):
            if items and self.at_punct(","):
                self.advance()
            items.append(item())
        self.advance()
        return items

    def triangle(self):
        self.expect_punct("(")
        a = self.point()
        self.expect_punct(",")
        b = self.point()
        self.expect_punct(",")
        c = self.point()
        self.expect_punct(")")
        return (a, b, c)

    def point(self) -> Point:
        self.expect_punct("(")
        x = self.quantity()
        self.expect_punct(",")
        y = self.quantity()
        self.expect_punct(",")
        z = self.quantity()
        self.expect_punct(")")
        return (x, y, z)

    def quantity(self) -> QuantityDecl:
        tok = self.tok
        magnitude = self.expect_number()
        unit = self.tok
        if unit.type is not Tok.IDENT:
            self.fail(f"expected unit symbol after {tok.text}, found {unit.describe()}")
        if unit.text not in UNIT_SYMBOLS:
            self.fail(f"unknown unit {unit.text!r}", unit, "UNKNOWN_UNIT")
        self.advance()
        return QuantityDecl(magnitude, unit.text, Pos(tok.line, tok.column))

    # -- blocks and host types -----------------------------------------

    def block_decl(self, _kw: str, name: str, pos: Pos) -> FunctionBlockDecl:
        refs: dict[str, Ref] = {}

        def section(key: str):
            def handler() -> None:
                refs[key] = self.ref(f"{key} node name")

            return handler

        self.sections({key: section(key) for key in _HOOK_SECTIONS})
        missing = [k for k in _HOOK_SECTIONS if k not in refs]
        if missing:
            self.fail(f"FunctionBlock '{name}' is missing {', '.join(missing)}")
        return FunctionBlockDecl(name, *(refs[k] for k in _HOOK_SECTIONS), pos=pos)

    def host_type_decl(self, kw: str, name: str, pos: Pos):
        found: dict[str, str] = {}

        def type_() -> None:
            tok = self.tok
            found["type"] = self.expect_string()
            if not found["type"]:
                self.fail("host type name must not be empty", tok)

        def header() -> None:
            found["header"] = self.expect_string()

        self.sections({"type": type_, "header": header})
        if "type" not in found:
            self.fail(f"{kw} '{name}' requires a 'type' section")
        cls = PointCloudTypeDecl if kw == "PointCloudType" else MeshTypeDecl
        return cls(name, found["type"], found.get("header"), pos)


def parse(source: str) -> SourceModel:
    """Parse ``.rsg`` source text.

    Raises :class:`~rsgdsl.diagnostics.ParseError` carrying the first lexical
    or syntax error.
    """
    return _Parser(source).parse_file()
