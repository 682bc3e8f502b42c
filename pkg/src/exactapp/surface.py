"""Concrete syntax: lexing, parsing of declarations and expressions, name
resolution, and a printer that round-trips through the parser."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Collection, Iterable, Optional, Union


@dataclass(frozen=True)
class Loc:
    line: int = 1
    col: int = 1

    def __str__(self):
        return f"{self.line}:{self.col}"


NOWHERE = Loc(0, 0)


class SurfaceError(Exception):
    def __init__(self, message: str, loc: Loc):
        super().__init__(f"{loc}: {message}")
        self.message = message
        self.loc = loc


class LexError(SurfaceError):
    kind = "LexError"


class ParseError(SurfaceError):
    kind = "ParseError"


class DuplicateDeclaration(ParseError):
    kind = "DuplicateDeclaration"


class UnboundIdentifier(SurfaceError):
    kind = "UnboundVariable"

    def __init__(self, name: str, loc: Loc):
        super().__init__(f"unbound identifier {name}", loc)
        self.name = name


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUM, SYM, EOF
    text: str
    loc: Loc


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<NUM>[0-9]+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<SYM>->|[()\\.:=λ])
    """,
    re.VERBOSE,
)

KEYWORDS = frozenset({"def"})


def tokenize(src: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        loc = Loc(line, pos - line_start + 1)
        if m is None:
            raise LexError(f"unexpected character {src[pos]!r}", loc)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("NUM", "IDENT", "SYM"):
            text = m.group()
            out.append(Token(kind, "\\" if text == "λ" else text, loc))
        pos = m.end()
    out.append(Token("EOF", "", Loc(line, pos - line_start + 1)))
    return out


# ---------------------------------------------------------------------------
# Syntax trees


@dataclass(frozen=True)
class Ref:
    """An identifier before resolution."""

    name: str
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class FnRef:
    name: str
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class LocalRef:
    name: str
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class SApp:
    fun: Expr
    arg: Expr
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class SLam:
    binder: str
    body: Expr
    loc: Loc = field(default=NOWHERE, compare=False)


Expr = Union[Ref, FnRef, LocalRef, SApp, SLam]


@dataclass(frozen=True)
class TNat:
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class TPi:
    binder: Optional[str]  # None for the non-dependent arrow sugar
    dom: SType
    cod: SType
    loc: Loc = field(default=NOWHERE, compare=False)


SType = Union[TNat, TPi]


@dataclass(frozen=True)
class Declaration:
    name: str
    params: tuple[tuple[str, SType], ...]
    ret: SType
    body: Optional[Expr] = None
    primitive: Optional[str] = None
    loc: Loc = field(default=NOWHERE, compare=False)

    def __post_init__(self):
        if (self.body is None) == (self.primitive is None):
            raise ValueError("a declaration has either a body or a primitive tag")

    @property
    def arity(self):
        return len(self.params)


# ---------------------------------------------------------------------------
# Parser


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str, offset: int = 0) -> bool:
        t = self.toks[min(self.i + offset, len(self.toks) - 1)]
        return t.kind in ("SYM", "IDENT") and t.text == text

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def ident(self) -> Token:
        t = self.peek
        if t.kind != "IDENT" or t.text in KEYWORDS:
            self.fail("expected an identifier")
        return self.next()

    def fail(self, what: str):
        t = self.peek
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"{what}, found {found}", t.loc)

    def eof(self):
        if self.peek.kind != "EOF":
            self.fail("expected end of input")

    # expressions

    def expr(self) -> Expr:
        if self.at("\\"):
            loc = self.next().loc
            x = self.ident().text
            self.expect(".")
            return SLam(x, self.expr(), loc)
        return self.app()

    def _atom_start(self) -> bool:
        t = self.peek
        return (t.kind == "IDENT" and t.text not in KEYWORDS) or t.kind == "NUM" or self.at("(")

    def app(self) -> Expr:
        if not self._atom_start():
            self.fail("expected an expression")
        e = self.atom()
        while self._atom_start():
            e = SApp(e, self.atom(), e.loc)
        return e

    def atom(self) -> Expr:
        t = self.peek
        if t.kind == "NUM":
            self.next()
            return desugar_numeral(int(t.text), t.loc)
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        return Ref(self.ident().text, t.loc)

    # types

    def type_(self) -> SType:
        loc = self.peek.loc
        if self.at("(") and self.peek_is_ident(1) and self.at(":", 2):
            self.next()
            x = self.ident().text
            self.expect(":")
            dom = self.type_()
            self.expect(")")
            self.expect("->")
            return TPi(x, dom, self.type_(), loc)
        dom = self.type_atom()
        if self.at("->"):
            self.next()
            return TPi(None, dom, self.type_(), loc)
        return dom

    def peek_is_ident(self, offset: int) -> bool:
        t = self.toks[min(self.i + offset, len(self.toks) - 1)]
        return t.kind == "IDENT"

    def type_atom(self) -> SType:
        t = self.peek
        if self.at("("):
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        if self.at("Nat"):
            self.next()
            return TNat(t.loc)
        self.fail("expected a type")

    # declarations

    def decl(self) -> Declaration:
        loc = self.expect("def").loc
        name = self.ident().text
        params = []
        seen = set()
        while self.at("("):
            self.next()
            p = self.ident()
            if p.text in seen:
                raise ParseError(f"duplicate parameter {p.text}", p.loc)
            seen.add(p.text)
            self.expect(":")
            params.append((p.text, self.type_()))
            self.expect(")")
        self.expect(":")
        ret = self.type_()
        if self.at("="):
            self.next()
            return Declaration(name, tuple(params), ret, body=self.expr(), loc=loc)
        if self.at("primitive"):
            self.next()
            return Declaration(name, tuple(params), ret, primitive=self.ident().text, loc=loc)
        self.fail("expected '=' or 'primitive'")

    def file(self) -> list[Declaration]:
        out = []
        names: set[str] = set()
        while self.peek.kind != "EOF":
            start = self.peek.loc
            d = self.decl()
            if d.name in names:
                raise DuplicateDeclaration(f"duplicate declaration {d.name}", start)
            names.add(d.name)
            out.append(d)
        return out


def desugar_numeral(n: int, loc: Loc = NOWHERE) -> Expr:
    e: Expr = Ref("zero", loc)
    for _ in range(n):
        e = SApp(Ref("suc", loc), e, loc)
    return e


def parse_file(src: str) -> list[Declaration]:
    return Parser(src).file()


def parse_expr(src: str) -> Expr:
    p = Parser(src)
    e = p.expr()
    p.eof()
    return e


def parse_type(src: str) -> SType:
    p = Parser(src)
    ty = p.type_()
    p.eof()
    return ty


# ---------------------------------------------------------------------------
# Resolution


def resolve(e: Expr, functions: Collection[str], locals: Iterable[str] = ()) -> Expr:
    """Classify every identifier as a function or a local reference. Locals
    shadow functions, inner binders shadow outer ones."""

    def go(e: Expr, scope: frozenset[str]) -> Expr:
        match e:
            case Ref(name, loc) | FnRef(name, loc) | LocalRef(name, loc):
                if name in scope:
                    return LocalRef(name, loc)
                if name in functions:
                    return FnRef(name, loc)
                raise UnboundIdentifier(name, loc)
            case SApp(f, a, loc):
                return SApp(go(f, scope), go(a, scope), loc)
            case SLam(x, body, loc):
                return SLam(x, go(body, scope | {x}), loc)
        raise TypeError(f"not an expression: {e!r}")

    return go(e, frozenset(locals))


# ---------------------------------------------------------------------------
# Printing


def show(e: Expr) -> str:
    match e:
        case SLam(x, body):
            return f"\\{x}. {show(body)}"
        case SApp(f, a):
            head = f"({show(f)})" if isinstance(f, SLam) else show(f)
            return f"{head} {_show_arg(a)}"
        case Ref(name) | FnRef(name) | LocalRef(name):
            return name
    raise TypeError(f"not an expression: {e!r}")


def _show_arg(e: Expr) -> str:
    if isinstance(e, (SApp, SLam)):
        return f"({show(e)})"
    return show(e)


def show_type(t: SType) -> str:
    match t:
        case TNat():
            return "Nat"
        case TPi(None, dom, cod):
            d = show_type(dom)
            if isinstance(dom, TPi):
                d = f"({d})"
            return f"{d} -> {show_type(cod)}"
        case TPi(x, dom, cod):
            return f"({x} : {show_type(dom)}) -> {show_type(cod)}"
    raise TypeError(f"not a type: {t!r}")


def show_decl(d: Declaration) -> str:
    params = "".join(f" ({x} : {show_type(t)})" for x, t in d.params)
    head = f"def {d.name}{params} : {show_type(d.ret)}"
    if d.body is not None:
        return f"{head} = {show(d.body)}"
    return f"{head} primitive {d.primitive}"
