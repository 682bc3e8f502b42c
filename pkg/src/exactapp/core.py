"""Core terms with exactly-applied function calls.

Application comes in two flavours: ``FnCall`` carries a function symbol
together with its complete argument spine, ``App`` is ordinary binary
application and is only ever used for heads that are not function symbols
(variables, or the result of a call that returns a function).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import ClassVar, Iterable, Iterator, Mapping, Optional, Sequence, Union


@dataclass(frozen=True)
class Ident:
    """A variable identity. ``text`` is only a printing hint."""

    id: int
    text: str = field(compare=False)

    _counter: ClassVar[Iterator[int]] = itertools.count(1)

    @classmethod
    def fresh(cls, text: str = "x") -> Ident:
        return cls(next(cls._counter), text)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"{self.text}#{self.id}"


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class FnCall(Term):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Var(Term):
    v: Ident


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Pi(Term):
    binder: Ident
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Lam(Term):
    binder: Ident
    body: Term


CoreTerm = Union[FnCall, Var, App, Pi, Lam]


@dataclass(frozen=True)
class Param:
    name: Ident
    type: Term


Telescope = tuple[Param, ...]


@dataclass(frozen=True)
class Primitive:
    rule: str


@dataclass(frozen=True)
class Defined:
    body: Term


@dataclass(frozen=True)
class Signature:
    name: str
    params: Telescope
    ret: Optional[Term]  # None only for built-in type formers such as Nat
    body: Union[Primitive, Defined]

    @property
    def arity(self) -> int:
        return len(self.params)


Signatures = Mapping[str, Signature]


# ---------------------------------------------------------------------------
# Free variables and substitution


def free_vars(t: Term) -> frozenset[Ident]:
    match t:
        case Var(v):
            return frozenset((v,))
        case FnCall(_, args):
            return frozenset().union(*map(free_vars, args))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Pi(x, dom, cod):
            return free_vars(dom) | (free_vars(cod) - {x})
        case Lam(x, body):
            return free_vars(body) - {x}
    raise TypeError(f"not a core term: {t!r}")


class Substitution:
    """A simultaneous substitution ``u1/x1, ..., un/xn``."""

    __slots__ = ("_map", "_fv")

    def __init__(self, pairs: Iterable[tuple[Ident, Term]] = ()):
        m: dict[Ident, Term] = {}
        for x, u in pairs:
            if x in m:
                raise ValueError(f"variable {x!r} substituted twice")
            m[x] = u
        self._map = m
        self._fv: Optional[frozenset[Ident]] = None

    @classmethod
    def of(cls, xs: Sequence[Ident], us: Sequence[Term]) -> Substitution:
        if len(xs) != len(us):
            raise ValueError(f"{len(xs)} variables but {len(us)} terms")
        return cls(zip(xs, us))

    def __len__(self):
        return len(self._map)

    def __contains__(self, x):
        return x in self._map

    def __iter__(self):
        return iter(self._map.items())

    def get(self, x: Ident) -> Optional[Term]:
        return self._map.get(x)

    def payload_vars(self) -> frozenset[Ident]:
        if self._fv is None:
            self._fv = frozenset().union(*map(free_vars, self._map.values()))
        return self._fv

    def under(self, x: Ident) -> tuple[Ident, Substitution]:
        """Push the substitution under a binder ``x``, renaming it if a payload
        would otherwise be captured."""
        inner = self
        if x in self._map:
            inner = Substitution((y, u) for y, u in self._map.items() if y != x)
        if x in inner.payload_vars():
            y = Ident.fresh(x.text)
            inner = Substitution(itertools.chain(inner, [(x, Var(y))]))
            return y, inner
        return x, inner

    def __repr__(self):
        inner = ", ".join(f"{u!r}/{x!r}" for x, u in self._map.items())
        return f"Substitution[{inner}]"


def substitute(t: Term, sigma: Substitution) -> Term:
    if not len(sigma):
        return t
    match t:
        case Var(v):
            u = sigma.get(v)
            return t if u is None else u
        case FnCall(name, args):
            return FnCall(name, tuple(substitute(a, sigma) for a in args))
        case App(f, a):
            return App(substitute(f, sigma), substitute(a, sigma))
        case Pi(x, dom, cod):
            dom = substitute(dom, sigma)
            x, inner = sigma.under(x)
            return Pi(x, dom, substitute(cod, inner))
        case Lam(x, body):
            x, inner = sigma.under(x)
            return Lam(x, substitute(body, inner))
    raise TypeError(f"not a core term: {t!r}")


def subst1(t: Term, x: Ident, u: Term) -> Term:
    return substitute(t, Substitution([(x, u)]))


def rename(t: Term, old: Ident, new: Ident) -> Term:
    return subst1(t, old, Var(new))


def alpha_eq(a: Term, b: Term) -> bool:
    """Structural equality up to the names of bound variables."""

    def go(a, b, la: dict, lb: dict, depth: int) -> bool:
        match a, b:
            case Var(x), Var(y):
                i, j = la.get(x), lb.get(y)
                if i is None and j is None:
                    return x == y
                return i == j
            case FnCall(f, xs), FnCall(g, ys):
                return (
                    f == g
                    and len(xs) == len(ys)
                    and all(go(x, y, la, lb, depth) for x, y in zip(xs, ys))
                )
            case App(f, x), App(g, y):
                return go(f, g, la, lb, depth) and go(x, y, la, lb, depth)
            case Pi(x, d1, c1), Pi(y, d2, c2):
                return go(d1, d2, la, lb, depth) and go(
                    c1, c2, {**la, x: depth}, {**lb, y: depth}, depth + 1
                )
            case Lam(x, b1), Lam(y, b2):
                return go(b1, b2, {**la, x: depth}, {**lb, y: depth}, depth + 1)
        return False

    return go(a, b, {}, {}, 0)


# ---------------------------------------------------------------------------
# Smart application and telescope helpers


def apply(u: Term, v: Term) -> Term:
    """Binary application that contracts a lambda head immediately."""
    if isinstance(u, Lam):
        return subst1(u.body, u.binder, v)
    return App(u, v)


def apply_all(u: Term, vs: Iterable[Term]) -> Term:
    for v in vs:
        u = apply(u, v)
    return u


def vars_of(delta: Telescope) -> tuple[Term, ...]:
    return tuple(Var(p.name) for p in delta)


def gen_lam(body: Term, delta: Telescope) -> Term:
    for p in reversed(delta):
        body = Lam(p.name, body)
    return body


def gen_pi(ret: Term, delta: Telescope) -> Term:
    for p in reversed(delta):
        ret = Pi(p.name, p.type, ret)
    return ret


def param_of(sig: Signature) -> Telescope:
    return sig.params


def ret_ty(sig: Signature) -> Term:
    """The full curried type of a function: its telescope folded into Pi-types
    over the declared return type."""
    if sig.ret is None:
        raise ValueError(f"{sig.name} is a type former and has no type here")
    return gen_pi(sig.ret, sig.params)


# ---------------------------------------------------------------------------
# Exactly-applied verifier


@dataclass(frozen=True)
class Violation:
    path: tuple[str, ...]
    name: str
    expected: Optional[int]  # None when the function is unknown
    actual: int

    def __str__(self):
        where = ".".join(self.path) or "<root>"
        if self.expected is None:
            return f"{where}: unknown function {self.name}"
        return f"{where}: {self.name} expects {self.expected} argument(s), got {self.actual}"


def check_exactly_applied(t: Term, sigs: Signatures) -> list[Violation]:
    out: list[Violation] = []

    def go(t: Term, path: tuple[str, ...]):
        match t:
            case FnCall(name, args):
                sig = sigs.get(name)
                if sig is None:
                    out.append(Violation(path, name, None, len(args)))
                elif sig.arity != len(args):
                    out.append(Violation(path, name, sig.arity, len(args)))
                for i, a in enumerate(args):
                    go(a, path + (f"args[{i}]",))
            case Var():
                pass
            case App(f, a):
                go(f, path + ("fun",))
                go(a, path + ("arg",))
            case Pi(_, dom, cod):
                go(dom, path + ("dom",))
                go(cod, path + ("cod",))
            case Lam(_, body):
                go(body, path + ("body",))
            case _:
                raise TypeError(f"not a core term: {t!r}")

    go(t, ())
    return out


def check_signature(sig: Signature, sigs: Signatures) -> list[Violation]:
    out = []
    for i, p in enumerate(sig.params):
        out += [_prefix(v, f"param[{i}]") for v in check_exactly_applied(p.type, sigs)]
    if sig.ret is not None:
        out += [_prefix(v, "ret") for v in check_exactly_applied(sig.ret, sigs)]
    if isinstance(sig.body, Defined):
        out += [_prefix(v, "body") for v in check_exactly_applied(sig.body.body, sigs)]
    return out


def _prefix(v: Violation, step: str) -> Violation:
    return Violation((step,) + v.path, v.name, v.expected, v.actual)


# ---------------------------------------------------------------------------
# Numerals

ZERO = "zero"
SUC = "suc"
NAT = "Nat"


def numeral(n: int) -> Term:
    t: Term = FnCall(ZERO)
    for _ in range(n):
        t = FnCall(SUC, (t,))
    return t


NAT_TYPE = FnCall(NAT)
