"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from typing import Optional

from exactapp import surface as s
from exactapp.core import (
    App,
    FnCall,
    Ident,
    Lam,
    Pi,
    Substitution,
    Term,
    Var,
    alpha_eq,
    free_vars,
)
from exactapp.elaborate import Context, elab_decls

# add3 has arity 3, hop takes a function and returns one, so generated terms
# exercise both higher-order arguments and over-application.
TEST_DECLS = """\
def add3 (a : Nat) (b : Nat) (c : Nat) : Nat = plus a (plus b c)
def hop (g : Nat -> Nat) (n : Nat) : Nat -> Nat = \\m. plus (g n) m
"""


def make_sigs():
    sigs, errors = elab_decls(s.parse_file(TEST_DECLS))
    assert not errors, errors
    return sigs


# ---------------------------------------------------------------------------
# Untyped, well-scoped core terms


def random_core(
    rng: random.Random,
    depth: int,
    sigs,
    scope: list[Ident],
    binders: list[Ident],
) -> Term:
    """A well-scoped core term whose calls are exactly-applied. Binders are
    drawn from ``binders`` (so identities repeat and shadow) or made fresh."""
    leaves = [Var(x) for x in scope] + [FnCall(n) for n, g in sigs.items() if g.arity == 0]
    if depth <= 0 or rng.random() < 0.15:
        return rng.choice(leaves)
    k = rng.randrange(5)
    if k == 0:
        fns = [(n, g.arity) for n, g in sigs.items() if g.arity > 0]
        name, arity = rng.choice(fns)
        return FnCall(
            name, tuple(random_core(rng, depth - 1, sigs, scope, binders) for _ in range(arity))
        )
    if k == 1:
        return App(
            random_core(rng, depth - 1, sigs, scope, binders),
            random_core(rng, depth - 1, sigs, scope, binders),
        )
    x = rng.choice(binders) if rng.random() < 0.5 else Ident.fresh(rng.choice("xya"))
    if k == 2:
        return Pi(
            x,
            random_core(rng, depth - 1, sigs, scope, binders),
            random_core(rng, depth - 1, sigs, scope + [x], binders),
        )
    return Lam(x, random_core(rng, depth - 1, sigs, scope + [x], binders))


def random_substitution(rng: random.Random, depth: int, sigs, pool: list[Ident]) -> Substitution:
    keys = rng.sample(pool, rng.randint(1, len(pool)))
    return Substitution((k, random_core(rng, depth, sigs, pool, pool)) for k in keys)


def naive_substitute(t: Term, sigma: dict) -> Term:
    """Oracle: rename every binder to a brand new identity on the way down,
    so capture is impossible by construction."""
    match t:
        case Var(v):
            return sigma.get(v, t)
        case FnCall(name, args):
            return FnCall(name, tuple(naive_substitute(a, sigma) for a in args))
        case App(f, a):
            return App(naive_substitute(f, sigma), naive_substitute(a, sigma))
        case Pi(x, dom, cod):
            y = Ident.fresh(x.text)
            return Pi(y, naive_substitute(dom, sigma), naive_substitute(cod, {**sigma, x: Var(y)}))
        case Lam(x, body):
            y = Ident.fresh(x.text)
            return Lam(y, naive_substitute(body, {**sigma, x: Var(y)}))
    raise TypeError(t)


def eta_contract(t: Term) -> Term:
    match t:
        case Lam(x, body):
            body = eta_contract(body)
            if isinstance(body, App) and body.arg == Var(x) and x not in free_vars(body.fun):
                return body.fun
            return Lam(x, body)
        case Pi(x, d, c):
            return Pi(x, eta_contract(d), eta_contract(c))
        case App(f, a):
            return App(eta_contract(f), eta_contract(a))
        case FnCall(n, args):
            return FnCall(n, tuple(map(eta_contract, args)))
    return t


def oracle_convertible(a: Term, b: Term, sigs) -> bool:
    """Normalize, eta-contract, compare up to alpha."""
    from exactapp.reduce import normalize

    return alpha_eq(eta_contract(normalize(a, sigs)), eta_contract(normalize(b, sigs)))


# ---------------------------------------------------------------------------
# Well-typed surface expressions
#
# Simple types: "N" for Nat, (A, B) for A -> B.

N = "N"
FN_TYPES = {
    "zero": N,
    "suc": (N, N),
    "plus": (N, (N, N)),
    "max": (N, (N, N)),
    "add3": (N, (N, (N, N))),
    "hop": ((N, N), (N, (N, N))),
}
TARGETS = [N, (N, N), (N, (N, N))]
BINDER_NAMES = ["x", "y", "z", "n", "m", "max"]


def to_surface_type(t) -> s.SType:
    if t == N:
        return s.TNat()
    return s.TPi(None, to_surface_type(t[0]), to_surface_type(t[1]))


def _spines(t):
    """(args, result) pairs for applying a head of type ``t`` to 0.. args."""
    args = []
    yield tuple(args), t
    while t != N:
        args.append(t[0])
        t = t[1]
        yield tuple(args), t


class WellTyped:
    def __init__(self, rng: random.Random, fns: Optional[dict] = None):
        self.rng = rng
        self.fns = FN_TYPES if fns is None else fns

    def check(self, ty, depth: int, env: dict) -> s.Expr:
        rng = self.rng
        options = []
        if ty != N and depth > 0:
            options.append("lam")
        heads = self._heads(ty, depth, env)
        if heads:
            options += ["head"] * 3
        if ty == N:
            options.append("num")
        if not options:
            options.append("lam")
        match rng.choice(options):
            case "lam":
                x = rng.choice(BINDER_NAMES)
                return s.SLam(x, self.check(ty[1], depth - 1, {**env, x: ty[0]}))
            case "num":
                return s.desugar_numeral(rng.randint(0, 3))
            case _:
                name, args = rng.choice(heads)
                e: s.Expr = s.Ref(name)
                for a in args:
                    e = s.SApp(e, self.check(a, depth - 1, env))
                return e

    def _heads(self, ty, depth: int, env: dict):
        out = []
        visible = [(n, t) for n, t in env.items()]
        visible += [(n, t) for n, t in self.fns.items() if n not in env]
        for name, t in visible:
            for args, res in _spines(t):
                if res == ty and (depth > 0 or not args):
                    out.append((name, args))
        return out


def expr_depth(e: s.Expr) -> int:
    match e:
        case s.SApp(f, a):
            return 1 + max(expr_depth(f), expr_depth(a))
        case s.SLam(_, b):
            return 1 + expr_depth(b)
    return 0


def random_surface(rng: random.Random, depth: int, names=("a", "b", "f", "g")) -> s.Expr:
    """An unresolved, not necessarily well-typed surface expression."""
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.2:
            return s.desugar_numeral(rng.randint(0, 2))
        return s.Ref(rng.choice(names))
    if rng.random() < 0.6:
        return s.SApp(random_surface(rng, depth - 1, names), random_surface(rng, depth - 1, names))
    return s.SLam(rng.choice(names), random_surface(rng, depth - 1, names))


def typed_context(sigs) -> tuple[Context, dict]:
    """A context with locals ``u : Nat`` and ``h : Nat -> Nat``."""
    from exactapp.core import NAT_TYPE

    ctx = Context(sigs)
    ctx, _ = ctx.extend("u", NAT_TYPE)
    ctx, _ = ctx.extend("h", Pi(Ident.fresh("x"), NAT_TYPE, NAT_TYPE))
    return ctx, {"u": N, "h": (N, N)}


def core_type(t) -> Term:
    from exactapp.core import NAT_TYPE

    if t == N:
        return NAT_TYPE
    return Pi(Ident.fresh("x"), core_type(t[0]), core_type(t[1]))


def source_depth(e: s.Expr) -> int:
    """Nesting depth as written: numerals and identifiers are leaves, an
    application spine is one level above its deepest argument."""
    if _is_numeral(e):
        return 0
    match e:
        case s.SLam(_, body):
            return 1 + source_depth(body)
        case s.SApp():
            args = []
            while isinstance(e, s.SApp):
                args.append(e.arg)
                e = e.fun
            return 1 + max(source_depth(a) for a in args + [e])
    return 0


def _is_numeral(e: s.Expr) -> bool:
    while isinstance(e, s.SApp) and e.fun == s.Ref("suc"):
        e = e.arg
    return e == s.Ref("zero")
