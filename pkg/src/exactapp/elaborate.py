"""Bidirectional elaboration of surface expressions into core terms.

Function references elaborate to a lambda wrapped around a fully applied
call, so every call the elaborator produces is exactly-applied; applying
such a term to an argument just substitutes into the lambda.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from . import surface as s
from .core import (
    NAT,
    Defined,
    FnCall,
    Ident,
    Lam,
    Param,
    Pi,
    Primitive,
    Signature,
    Signatures,
    Term,
    Var,
    apply,
    gen_lam,
    param_of,
    ret_ty,
    subst1,
    vars_of,
)
from .printer import pretty
from .reduce import PRIM_RULES, Reducer


class ElabError(Exception):
    kind = "ElabError"

    def __init__(self, message: str, loc: s.Loc, decl: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.loc = loc
        self.decl = decl

    def __str__(self):
        where = f" in {self.decl}" if self.decl else ""
        return f"{self.loc}: {self.kind}{where}: {self.message}"


class TypeMismatch(ElabError):
    kind = "TypeMismatch"

    def __init__(self, expected: Term, actual: Term | str, loc: s.Loc):
        shown = actual if isinstance(actual, str) else pretty(actual)
        super().__init__(f"expected {pretty(expected)}, got {shown}", loc)
        self.expected = expected
        self.actual = actual


class NotAFunction(ElabError):
    kind = "NotAFunction"

    def __init__(self, type: Term, loc: s.Loc):
        super().__init__(f"cannot apply a term of type {pretty(type)}", loc)
        self.type = type


class UnboundVariable(ElabError):
    kind = "UnboundVariable"


class CannotInfer(ElabError):
    kind = "CannotInfer"


class BadDeclaration(ElabError):
    kind = "BadDeclaration"


@dataclass(frozen=True)
class Context:
    """Local bindings, innermost last, plus the global signature table."""

    sigs: Mapping[str, Signature]
    locals: tuple[tuple[Ident, Term], ...] = ()
    max_steps: Optional[int] = field(default=None, compare=False)

    def extend(self, name: str, type: Term) -> tuple[Context, Ident]:
        x = Ident.fresh(name)
        return Context(self.sigs, self.locals + ((x, type),), self.max_steps), x

    def bind(self, x: Ident, type: Term) -> Context:
        return Context(self.sigs, self.locals + ((x, type),), self.max_steps)

    def lookup(self, name: str) -> Optional[tuple[Ident, Term]]:
        for x, ty in reversed(self.locals):
            if x.text == name:
                return x, ty
        return None

    def local_names(self) -> list[str]:
        return [x.text for x, _ in self.locals]

    def env(self) -> dict[str, Ident]:
        return {x.text: x for x, _ in self.locals}

    def reducer(self) -> Reducer:
        return Reducer(self.sigs, self.max_steps)

    def resolve(self, e: s.Expr) -> s.Expr:
        return s.resolve(e, self.sigs, self.local_names())


def infer(ctx: Context, e: s.Expr) -> tuple[Term, Term]:
    match e:
        case s.LocalRef(name, loc):
            found = ctx.lookup(name)
            if found is None:
                raise UnboundVariable(f"unbound variable {name}", loc)
            x, ty = found
            return Var(x), ty
        case s.FnRef(name, loc):
            sig = ctx.sigs.get(name)
            if sig is None:
                raise UnboundVariable(f"unknown function {name}", loc)
            if sig.ret is None:
                raise CannotInfer(f"{name} is a type, not a term", loc)
            delta = param_of(sig)
            return gen_lam(FnCall(name, vars_of(delta)), delta), ret_ty(sig)
        case s.SApp(m, n, loc):
            u, fty = infer(ctx, m)
            fty = ctx.reducer().whnf(fty)
            if not isinstance(fty, Pi):
                raise NotAFunction(fty, m.loc)
            v = check(ctx, n, fty.dom)
            return apply(u, v), subst1(fty.cod, fty.binder, v)
        case s.SLam(_, _, loc):
            raise CannotInfer("cannot infer the type of a lambda; add a type", loc)
        case s.Ref(name, loc):
            raise UnboundVariable(f"unresolved identifier {name}", loc)
    raise TypeError(f"not an expression: {e!r}")


def check(ctx: Context, e: s.Expr, type: Term) -> Term:
    if isinstance(e, s.SLam):
        ty = ctx.reducer().whnf(type)
        if not isinstance(ty, Pi):
            raise TypeMismatch(type, "a function", e.loc)
        ctx2, x = ctx.extend(e.binder, ty.dom)
        return Lam(x, check(ctx2, e.body, subst1(ty.cod, ty.binder, Var(x))))
    u, actual = infer(ctx, e)
    if not ctx.reducer().convertible(actual, type):
        raise TypeMismatch(type, actual, e.loc)
    return u


def elab_type(ctx: Context, t: s.SType) -> Term:
    match t:
        case s.TNat(loc):
            if NAT not in ctx.sigs:
                raise UnboundVariable(f"unknown type {NAT}", loc)
            return FnCall(NAT)
        case s.TPi(x, dom, cod):
            a = elab_type(ctx, dom)
            ctx2, y = ctx.extend(x or "x", a)
            return Pi(y, a, elab_type(ctx2, cod))
    raise TypeError(f"not a type: {t!r}")


def elab_decl(sigs: Signatures, d: s.Declaration) -> Signature:
    if d.name in sigs:
        raise BadDeclaration(f"{d.name} is already defined", d.loc)
    ctx = Context(sigs)
    params = []
    for name, sty in d.params:
        ty = elab_type(ctx, sty)
        ctx, x = ctx.extend(name, ty)
        params.append(Param(x, ty))
    ret = elab_type(ctx, d.ret)
    if d.primitive is not None:
        rule = PRIM_RULES.get(d.primitive)
        if rule is not None and rule.arity != len(params):
            raise BadDeclaration(
                f"primitive {d.primitive} takes {rule.arity} argument(s), "
                f"{d.name} declares {len(params)}",
                d.loc,
            )
        body: Primitive | Defined = Primitive(d.primitive)
    else:
        body = Defined(check(ctx, ctx.resolve(d.body), ret))
    return Signature(d.name, tuple(params), ret, body)


def elab_decls(
    decls: Iterable[s.Declaration], sigs: Optional[Signatures] = None
) -> tuple[dict[str, Signature], list[ElabError]]:
    """Elaborate declarations in order, each seeing the ones before it.

    A failing declaration is reported and left out; the rest are still
    attempted. Returns the extended table and the errors.
    """
    table = dict(prelude() if sigs is None else sigs)
    errors = []
    for d in decls:
        try:
            table[d.name] = elab_decl(table, d)
        except (ElabError, s.SurfaceError) as err:
            if not isinstance(err, ElabError):
                err = UnboundVariable(err.message, err.loc)
            err.decl = d.name
            errors.append(err)
    return table, errors


PRELUDE_SOURCE = """\
def zero : Nat primitive natZero
def suc (x : Nat) : Nat primitive natSuc
def plus (x : Nat) (y : Nat) : Nat primitive natPlus
def max (x : Nat) (y : Nat) : Nat primitive natMax
"""

BUILTINS: dict[str, Signature] = {NAT: Signature(NAT, (), None, Primitive("type"))}


@functools.lru_cache(maxsize=None)
def _prelude() -> tuple[tuple[str, Signature], ...]:
    table, errors = elab_decls(s.parse_file(PRELUDE_SOURCE), BUILTINS)
    assert not errors, errors
    return tuple(table.items())


def prelude() -> dict[str, Signature]:
    """The built-in type ``Nat`` plus the four prelude functions."""
    return dict(_prelude())


def declaration_names(sigs: Signatures) -> list[str]:
    """Names of the table entries that are declarations, i.e. not built-in types."""
    return [name for name, sig in sigs.items() if sig.ret is not None]


def elaborate_expr(
    ctx: Context, e: s.Expr, type: Optional[Term] = None
) -> tuple[Term, Term]:
    """Resolve then elaborate; checks against ``type`` when given, otherwise infers."""
    e = ctx.resolve(e)
    if type is None:
        return infer(ctx, e)
    return check(ctx, e, type), type
