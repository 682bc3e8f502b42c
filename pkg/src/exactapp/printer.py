"""Text form of core terms.

Grammar::

    term  ::= lam | pi | app
    lam   ::= "\\" IDENT "." term
    pi    ::= "(" IDENT ":" term ")" "->" term
    app   ::= atom atom*
    atom  ::= IDENT | "(" term ")"

A call prints as its head followed by its spine; a binary application whose
left side is a call with arguments gets parentheses, as in ``(f a b) c``.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping, Optional

from .core import App, FnCall, Ident, Lam, Pi, Signatures, Term, Var, free_vars
from .surface import ParseError, Parser


def _fn_heads(t: Term) -> set[str]:
    match t:
        case FnCall(name, args):
            out = {name}
            for a in args:
                out |= _fn_heads(a)
            return out
        case App(f, a):
            return _fn_heads(f) | _fn_heads(a)
        case Pi(_, d, c):
            return _fn_heads(d) | _fn_heads(c)
        case Lam(_, b):
            return _fn_heads(b)
    return set()


def _canonical_names() -> Iterator[str]:
    yield from "xyz"
    for i in itertools.count(1):
        for c in "xyz":
            yield f"{c}{i}"


class _Printer:
    def __init__(self, canonical: bool, taken: set[str]):
        self.canonical = canonical
        self.names: dict[Ident, str] = {}
        self.taken = taken
        self.supply = _canonical_names()

    def name_of(self, v: Ident) -> str:
        return self.names.get(v, v.text)

    def bind(self, x: Ident, body: Term) -> str:
        avoid = {self.name_of(v) for v in free_vars(body) if v != x} | _fn_heads(body)
        if self.canonical:
            name = next(n for n in self.supply if n not in self.taken)
        else:
            base = x.text
            name = base
            for i in itertools.count(1):
                if name not in avoid:
                    break
                name = f"{base}{i}"
        self.names[x] = name
        return name

    def term(self, t: Term) -> str:
        match t:
            case Lam(x, body):
                old = self.names.get(x)
                n = self.bind(x, body)
                s = f"\\{n}. {self.term(body)}"
                self._restore(x, old)
                return s
            case Pi(x, dom, cod):
                d = self.term(dom)
                old = self.names.get(x)
                n = self.bind(x, cod)
                s = f"({n} : {d}) -> {self.term(cod)}"
                self._restore(x, old)
                return s
            case App(f, a):
                return f"{self.head(f)} {self.atom(a)}"
            case FnCall(name, args):
                return " ".join([name, *map(self.atom, args)])
            case Var(v):
                return self.name_of(v)
        raise TypeError(f"not a core term: {t!r}")

    def _restore(self, x: Ident, old: Optional[str]):
        if old is None:
            self.names.pop(x, None)
        else:
            self.names[x] = old

    def head(self, t: Term) -> str:
        if isinstance(t, App):
            return self.term(t)
        return self.atom(t)

    def atom(self, t: Term) -> str:
        match t:
            case Var() | FnCall(_, ()):
                return self.term(t)
        return f"({self.term(t)})"


def pretty(t: Term, canonical: bool = False) -> str:
    """Render a core term.

    By default binders keep their source names, renamed only where a name
    would capture another variable. With ``canonical=True`` binders are
    renamed to ``x, y, z, x1, ...`` in binder order, so alpha-equivalent
    terms render identically.
    """
    taken = {v.text for v in free_vars(t)} | _fn_heads(t)
    return _Printer(canonical, taken).term(t)


# ---------------------------------------------------------------------------
# Parsing


class CoreParser(Parser):
    def __init__(self, src: str, sigs: Signatures, env: Mapping[str, Ident]):
        super().__init__(src)
        self.sigs = sigs
        self.scope: dict[str, Ident] = dict(env)

    def core(self) -> Term:
        if self.at("\\"):
            self.next()
            x = Ident.fresh(self.ident().text)
            self.expect(".")
            return Lam(x, self.bound(x, self.core))
        if self.at("(") and self.peek_is_ident(1) and self.at(":", 2):
            self.next()
            x = Ident.fresh(self.ident().text)
            self.expect(":")
            dom = self.core()
            self.expect(")")
            self.expect("->")
            return Pi(x, dom, self.bound(x, self.core))
        return self.core_app()

    def bound(self, x: Ident, k) -> Term:
        old = self.scope.get(x.text)
        self.scope[x.text] = x
        try:
            return k()
        finally:
            if old is None:
                del self.scope[x.text]
            else:
                self.scope[x.text] = old

    def _core_atom_start(self) -> bool:
        t = self.peek
        return (t.kind == "IDENT" and t.text not in ("def",)) or self.at("(")

    def core_app(self) -> Term:
        if not self._core_atom_start():
            self.fail("expected a term")
        t = self.peek
        if t.kind == "IDENT" and t.text not in self.scope and t.text in self.sigs:
            self.next()
            arity = self.sigs[t.text].arity
            args = []
            for _ in range(arity):
                if not self._core_atom_start():
                    raise ParseError(f"{t.text} expects {arity} argument(s)", t.loc)
                args.append(self.core_atom())
            head: Term = FnCall(t.text, tuple(args))
        else:
            head = self.core_atom()
        while self._core_atom_start():
            head = App(head, self.core_atom())
        return head

    def core_atom(self) -> Term:
        t = self.peek
        if self.at("("):
            self.next()
            e = self.core()
            self.expect(")")
            return e
        name = self.ident().text
        if name in self.scope:
            return Var(self.scope[name])
        sig = self.sigs.get(name)
        if sig is None:
            raise ParseError(f"unbound identifier {name}", t.loc)
        if sig.arity:
            raise ParseError(f"{name} expects {sig.arity} argument(s)", t.loc)
        return FnCall(name)


def parse_term(src: str, sigs: Signatures, env: Mapping[str, Ident] = {}) -> Term:
    """Parse the text form of a core term. ``env`` names the free variables."""
    p = CoreParser(src, sigs, env)
    t = p.core()
    p.eof()
    return t
