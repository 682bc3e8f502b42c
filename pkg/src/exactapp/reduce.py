"""Beta and delta reduction, normalization, and conversion checking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import (
    App,
    Defined,
    FnCall,
    Ident,
    Lam,
    Pi,
    Primitive,
    Signatures,
    Substitution,
    Term,
    Var,
    alpha_eq,
    apply,
    numeral,
    rename,
    subst1,
    substitute,
)


class StepLimitExceeded(Exception):
    def __init__(self, limit: int):
        super().__init__(f"reduction exceeded {limit} steps")
        self.limit = limit


@dataclass(frozen=True)
class PrimRule:
    rule: str
    arity: int
    op: Optional[Callable[..., int]]  # None for constructors, which never reduce


PRIM_RULES: dict[str, PrimRule] = {
    r.rule: r
    for r in [
        PrimRule("natZero", 0, None),
        PrimRule("natSuc", 1, None),
        PrimRule("natPlus", 2, lambda m, n: m + n),
        PrimRule("natMax", 2, max),
    ]
}


class Reducer:
    """Call-by-name reduction against a signature table. Primitive arguments
    are normalized only when a primitive needs to see a numeral."""

    def __init__(self, sigs: Signatures, max_steps: Optional[int] = None):
        self.sigs = sigs
        self.max_steps = max_steps
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise StepLimitExceeded(self.max_steps)

    def delta(self, t: FnCall) -> Optional[Term]:
        sig = self.sigs[t.name]
        assert len(t.args) == sig.arity, (
            f"{t.name} applied to {len(t.args)} argument(s), declared {sig.arity}"
        )
        match sig.body:
            case Defined(body):
                return substitute(body, Substitution.of([p.name for p in sig.params], t.args))
            case Primitive(rule):
                prim = PRIM_RULES.get(rule)
                if prim is None or prim.op is None:
                    return None
                ns = []
                for a in t.args:
                    n = self.numeral_value(a)
                    if n is None:
                        return None
                    ns.append(n)
                return numeral(prim.op(*ns))
        raise TypeError(f"bad signature body {sig.body!r}")

    def numeral_value(self, t: Term) -> Optional[int]:
        n = 0
        while True:
            t = self.whnf(t)
            if not isinstance(t, FnCall):
                return None
            body = self.sigs[t.name].body
            if body == Primitive("natZero"):
                return n
            if body != Primitive("natSuc"):
                return None
            n += 1
            (t,) = t.args

    def whnf(self, t: Term) -> Term:
        while True:
            match t:
                case App(f, a):
                    head = self.whnf(f)
                    if isinstance(head, Lam):
                        self._tick()
                        t = subst1(head.body, head.binder, a)
                        continue
                    return t if head is f else App(head, a)
                case FnCall():
                    r = self.delta(t)
                    if r is None:
                        return t
                    self._tick()
                    t = r
                    continue
            return t

    def normalize(self, t: Term) -> Term:
        t = self.whnf(t)
        match t:
            case Lam(x, body):
                return Lam(x, self.normalize(body))
            case Pi(x, dom, cod):
                return Pi(x, self.normalize(dom), self.normalize(cod))
            case App(f, a):
                return App(self.normalize(f), self.normalize(a))
            case FnCall(name, args):
                return FnCall(name, tuple(self.normalize(a) for a in args))
        return t

    def convertible(self, a: Term, b: Term) -> bool:
        if alpha_eq(a, b):
            return True
        if (
            isinstance(a, FnCall)
            and isinstance(b, FnCall)
            and a.name == b.name
            and isinstance(self.sigs[a.name].body, Defined)
            and all(self.convertible(x, y) for x, y in zip(a.args, b.args))
        ):
            return True
        a, b = self.whnf(a), self.whnf(b)
        match a, b:
            case Lam(x, b1), Lam(y, b2):
                z = Ident.fresh(x.text)
                return self.convertible(rename(b1, x, z), rename(b2, y, z))
            case Lam(x, body), _:
                z = Ident.fresh(x.text)
                return self.convertible(rename(body, x, z), apply(b, Var(z)))
            case _, Lam(y, body):
                z = Ident.fresh(y.text)
                return self.convertible(apply(a, Var(z)), rename(body, y, z))
            case Pi(x, d1, c1), Pi(y, d2, c2):
                z = Ident.fresh(x.text)
                return self.convertible(d1, d2) and self.convertible(
                    rename(c1, x, z), rename(c2, y, z)
                )
            case Var(x), Var(y):
                return x == y
            case App(f, x), App(g, y):
                return self.convertible(f, g) and self.convertible(x, y)
            case FnCall(f, xs), FnCall(g, ys):
                return (
                    f == g
                    and len(xs) == len(ys)
                    and all(self.convertible(x, y) for x, y in zip(xs, ys))
                )
        return False


def delta_step(t: FnCall, sigs: Signatures) -> Optional[Term]:
    return Reducer(sigs).delta(t)


def whnf(t: Term, sigs: Signatures, max_steps: Optional[int] = None) -> Term:
    return Reducer(sigs, max_steps).whnf(t)


def normalize(t: Term, sigs: Signatures, max_steps: Optional[int] = None) -> Term:
    return Reducer(sigs, max_steps).normalize(t)


def convertible(a: Term, b: Term, sigs: Signatures) -> bool:
    return Reducer(sigs).convertible(a, b)
