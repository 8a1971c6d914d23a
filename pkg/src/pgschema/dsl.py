"""Textual schema DSL: parser, canonical pretty-printer, and source spans.

The text form is the source of truth a schema round-trips through. Grammar:

    schema    := (node | edge)*
    node      := "NODE" name (":" name)? "{" props? "}"
    edge      := "EDGE" "(" name ")" "-[" name card? ("{" props? "}")? "]->" card? "(" name ")"
    props     := prop ("," prop)*
    prop      := key ":" dtype "?"?            -- "?" marks an optional property
    dtype     := STRING|INTEGER|FLOAT|BOOLEAN|DATE|ANY
    card      := "<" INT ".." (INT | "*") ">"  -- in-card after the label, out-card after "]->"
    name      := IDENT ("&" IDENT)*

Whitespace-insensitive; `//` starts a line comment. The name `_Unlabeled`
denotes the empty label set. An omitted card means 0..*.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .model import (
    UNLABELED,
    Cardinality,
    DataType,
    DEFAULT_CARDINALITY,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    SchemaIntegrityError,
    UnknownElementError,
    canonicalize,
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open [start, end) offset range of one declaration in canonical text.

    Offsets are 0-based; canonical text is ASCII so byte and character offsets
    coincide.
    """

    element_id: str
    start: int
    end: int


@dataclass(frozen=True)
class ParseError:
    line: int  # 1-based
    column: int  # 1-based
    message: str
    expected: Optional[str] = None

    def __str__(self) -> str:
        hint = f" (expected {self.expected})" if self.expected else ""
        return f"{self.line}:{self.column}: {self.message}{hint}"


class SchemaParseError(ValueError):
    """Raised by parse_schema; carries every error found in the pass."""

    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class SchemaText:
    text: str
    spans: tuple[SourceSpan, ...]


def span_of(spans: Iterable[SourceSpan], element_id: str) -> SourceSpan:
    for span in spans:
        if span.element_id == element_id:
            return span
    raise UnknownElementError(f"no span for element {element_id!r}")


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>\d+)"
    r"|(?P<lbracket>-\[)"
    r"|(?P<rbracket>\]->)"
    r"|(?P<dots>\.\.)"
    r"|(?P<sym>[{}(),:?&<>*])"
)

_EOF = "eof"


@dataclass(frozen=True)
class _Token:
    type: str  # ident | int | one of the literal symbols | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> tuple[list[_Token], list[ParseError]]:
    tokens: list[_Token] = []
    errors: list[ParseError] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            errors.append(ParseError(line, col, f"unexpected character {text[pos]!r}"))
            pos += 1
            col += 1
            continue
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind == "ident":
            tokens.append(_Token("ident", lexeme, line, col))
        elif kind == "int":
            tokens.append(_Token("int", lexeme, line, col))
        elif kind in ("lbracket", "rbracket", "dots", "sym"):
            tokens.append(_Token(lexeme, lexeme, line, col))
        # ws/comment are skipped, but still advance line/col below
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token(_EOF, "", line, col))
    return tokens, errors


# ------------------------------------------------------------------ parser

@dataclass
class _NodeDecl:
    labels: frozenset[str]
    name_tok: _Token
    supertype: Optional[str]  # display name
    supertype_tok: Optional[_Token]
    properties: list[PropertyDef]


@dataclass
class _EdgeDecl:
    label: str
    label_tok: _Token
    src: str
    src_tok: _Token
    dst: str
    dst_tok: _Token
    in_card: Cardinality
    out_card: Cardinality
    properties: list[PropertyDef]


class _SyncError(Exception):
    """Internal: abort the current declaration and resynchronize."""


class _Parser:
    def __init__(self, text: str):
        self.tokens, self.errors = _tokenize(text)
        self.pos = 0
        self.nodes: list[_NodeDecl] = []
        self.edges: list[_EdgeDecl] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.type != _EOF:
            self.pos += 1
        return tok

    def error(self, tok: _Token, message: str, expected: Optional[str] = None) -> None:
        self.errors.append(ParseError(tok.line, tok.column, message, expected))

    def fail(self, tok: _Token, message: str, expected: Optional[str] = None) -> _SyncError:
        self.error(tok, message, expected)
        return _SyncError()

    def expect(self, type_: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.type != type_:
            raise self.fail(tok, f"unexpected {tok.text!r}" if tok.type != _EOF else "unexpected end of input", expected)
        return self.advance()

    def sync_to_declaration(self) -> None:
        while True:
            tok = self.peek()
            if tok.type == _EOF or (tok.type == "ident" and tok.text in ("NODE", "EDGE")):
                return
            self.advance()

    def parse(self) -> None:
        while True:
            tok = self.peek()
            if tok.type == _EOF:
                return
            if tok.type == "ident" and tok.text == "NODE":
                try:
                    self.parse_node()
                except _SyncError:
                    self.sync_to_declaration()
            elif tok.type == "ident" and tok.text == "EDGE":
                try:
                    self.parse_edge()
                except _SyncError:
                    self.sync_to_declaration()
            else:
                self.error(tok, f"unexpected {tok.text!r}", expected="NODE or EDGE")
                self.advance()
                self.sync_to_declaration()

    def parse_name(self, what: str) -> tuple[frozenset[str], _Token]:
        first = self.expect("ident", f"{what} name")
        labels = [first.text]
        while self.peek().type == "&":
            self.advance()
            labels.append(self.expect("ident", "label").text)
        if UNLABELED in labels:
            if len(labels) > 1:
                raise self.fail(first, f"{UNLABELED!r} cannot be combined with other labels")
            return frozenset(), first
        return frozenset(labels), first

    def parse_node(self) -> None:
        self.expect("ident", "NODE")
        labels, name_tok = self.parse_name("node type")
        supertype = None
        supertype_tok = None
        if self.peek().type == ":":
            self.advance()
            super_labels, supertype_tok = self.parse_name("supertype")
            supertype = _display(super_labels)
        self.expect("{", "'{'")
        props = self.parse_props()
        self.expect("}", "'}'")
        self.nodes.append(_NodeDecl(labels, name_tok, supertype, supertype_tok, props))

    def parse_edge(self) -> None:
        self.expect("ident", "EDGE")
        self.expect("(", "'('")
        src, src_tok = self.parse_name("source type")
        self.expect(")", "')'")
        self.expect("-[", "'-['")
        label_set, label_tok = self.parse_name("edge label")
        in_card = DEFAULT_CARDINALITY
        if self.peek().type == "<":
            in_card = self.parse_card()
        props: list[PropertyDef] = []
        if self.peek().type == "{":
            self.advance()
            props = self.parse_props()
            self.expect("}", "'}'")
        self.expect("]->", "']->'")
        out_card = DEFAULT_CARDINALITY
        if self.peek().type == "<":
            out_card = self.parse_card()
        self.expect("(", "'('")
        dst, dst_tok = self.parse_name("target type")
        self.expect(")", "')'")
        self.edges.append(
            _EdgeDecl(
                label=_display(label_set),
                label_tok=label_tok,
                src=_display(src),
                src_tok=src_tok,
                dst=_display(dst),
                dst_tok=dst_tok,
                in_card=in_card,
                out_card=out_card,
                properties=props,
            )
        )

    def parse_card(self) -> Cardinality:
        open_tok = self.expect("<", "'<'")
        lo = int(self.expect("int", "integer").text)
        self.expect("..", "'..'")
        tok = self.peek()
        if tok.type == "*":
            self.advance()
            hi: Optional[int] = None
        elif tok.type == "int":
            self.advance()
            hi = int(tok.text)
        else:
            raise self.fail(tok, f"unexpected {tok.text!r}", expected="integer or '*'")
        self.expect(">", "'>'")
        if hi is not None and (hi < 1 or lo > hi):
            raise self.fail(open_tok, f"invalid cardinality {lo}..{hi}")
        return Cardinality(lo, hi)

    def parse_props(self) -> list[PropertyDef]:
        props: list[PropertyDef] = []
        seen: set[str] = set()
        if self.peek().type != "ident":
            return props
        while True:
            try:
                prop, key_tok = self.parse_prop()
                if prop.name in seen:
                    self.error(key_tok, f"duplicate property {prop.name!r}")
                else:
                    seen.add(prop.name)
                    props.append(prop)
            except _SyncError:
                self.skip_to_prop_boundary()
            tok = self.peek()
            if tok.type == ",":
                self.advance()
                continue
            return props

    def skip_to_prop_boundary(self) -> None:
        while True:
            tok = self.peek()
            if tok.type in (",", "}", _EOF):
                return
            if tok.type == "ident" and tok.text in ("NODE", "EDGE"):
                raise _SyncError()
            self.advance()

    def parse_prop(self) -> tuple[PropertyDef, _Token]:
        key_tok = self.expect("ident", "property name")
        self.expect(":", "':'")
        dtype_tok = self.expect("ident", "datatype")
        try:
            dtype = DataType[dtype_tok.text]
        except KeyError:
            raise self.fail(
                dtype_tok,
                f"unknown datatype {dtype_tok.text!r}",
                expected="STRING|INTEGER|FLOAT|BOOLEAN|DATE|ANY",
            )
        required = True
        if self.peek().type == "?":
            self.advance()
            required = False
        return PropertyDef(key_tok.text, dtype, required), key_tok

    def build(self) -> SchemaGraph:
        node_types: dict[str, NodeType] = {}
        for decl in self.nodes:
            display = _display(decl.labels)
            if display in node_types:
                self.error(decl.name_tok, f"duplicate node type {display!r}")
                continue
            node_types[display] = NodeType(labels=decl.labels, properties=tuple(decl.properties))

        # resolve supertypes by display name; detect unknown names and cycles
        supers: dict[str, str] = {}
        for decl in self.nodes:
            display = _display(decl.labels)
            if decl.supertype is None or display not in node_types:
                continue
            if decl.supertype not in node_types:
                self.error(decl.supertype_tok, f"unknown supertype {decl.supertype!r}")
            elif decl.supertype == display:
                self.error(decl.supertype_tok, f"{display!r} cannot be its own supertype")
            else:
                supers[display] = decl.supertype
        for start in supers:
            seen = {start}
            cur = supers.get(start)
            while cur is not None:
                if cur in seen:
                    decl = next(d for d in self.nodes if _display(d.labels) == start)
                    self.error(decl.supertype_tok, f"supertype cycle through {start!r}")
                    supers.pop(start)
                    break
                seen.add(cur)
                cur = supers.get(cur)

        resolved_nodes = tuple(
            NodeType(
                labels=nt.labels,
                properties=nt.properties,
                supertype=node_types[supers[name]].id if name in supers else None,
                id=nt.id,
            )
            for name, nt in node_types.items()
        )

        edge_types: list[EdgeType] = []
        triples: set[tuple[str, str, str]] = set()
        for decl in self.edges:
            src = node_types.get(decl.src)
            dst = node_types.get(decl.dst)
            if src is None:
                self.error(decl.src_tok, f"unknown node type {decl.src!r}")
                continue
            if dst is None:
                self.error(decl.dst_tok, f"unknown node type {decl.dst!r}")
                continue
            triple = (decl.label, decl.src, decl.dst)
            if triple in triples:
                self.error(
                    decl.label_tok,
                    f"duplicate edge type ({decl.src})-[{decl.label}]->({decl.dst})",
                )
                continue
            triples.add(triple)
            edge_types.append(
                EdgeType(
                    label=decl.label,
                    src=src.id,
                    dst=dst.id,
                    properties=tuple(decl.properties),
                    out_card=decl.out_card,
                    in_card=decl.in_card,
                )
            )

        if self.errors:
            raise SchemaParseError(self.errors)
        try:
            return SchemaGraph(resolved_nodes, tuple(edge_types))
        except SchemaIntegrityError as exc:  # pragma: no cover - parser checks precede
            raise SchemaParseError([ParseError(1, 1, str(exc))]) from exc


def _display(labels: frozenset[str]) -> str:
    return "&".join(sorted(labels)) if labels else UNLABELED


def parse_schema(text: str) -> SchemaGraph:
    """Parse DSL text into a schema; raises SchemaParseError with all positions."""
    parser = _Parser(text)
    parser.parse()
    return parser.build()


# ------------------------------------------------------------- serializer

def _prop_text(p: PropertyDef) -> str:
    return f"{p.name}: {p.datatype.value}{'' if p.required else '?'}"


def _props_block(props: tuple[PropertyDef, ...], indent: str = "") -> str:
    if not props:
        return "{}"
    if len(props) <= 2:
        return "{ " + ", ".join(_prop_text(p) for p in props) + " }"
    inner = ",\n".join(f"{indent}  {_prop_text(p)}" for p in props)
    return "{\n" + inner + f"\n{indent}}}"


def _card_text(c: Cardinality) -> str:
    return f"<{c}>"


def serialize_schema(s: SchemaGraph) -> SchemaText:
    """Canonical text plus a span per type declaration; parses back value-equal."""
    c = canonicalize(s)
    chunks: list[str] = []
    spans: list[SourceSpan] = []
    offset = 0

    def emit(element_id: str, decl: str) -> None:
        nonlocal offset
        spans.append(SourceSpan(element_id, offset, offset + len(decl)))
        chunks.append(decl)
        offset += len(decl) + 1  # the joining newline

    for nt in c.node_types:
        head = f"NODE {nt.display_name}"
        if nt.supertype is not None:
            head += f" : {c.node_display(nt.supertype)}"
        emit(nt.id, f"{head} {_props_block(nt.properties)}")

    for et in c.edge_types:
        inner = et.label
        if et.in_card != DEFAULT_CARDINALITY:
            inner += f" {_card_text(et.in_card)}"
        if et.properties:
            inner += f" {_props_block(et.properties)}"
        arrow = "]->"
        if et.out_card != DEFAULT_CARDINALITY:
            arrow += f" {_card_text(et.out_card)}"
        decl = f"EDGE ({c.node_display(et.src)}) -[{inner}{arrow} ({c.node_display(et.dst)})"
        emit(et.id, decl)

    text = "\n".join(chunks) + ("\n" if chunks else "")
    return SchemaText(text, tuple(spans))
