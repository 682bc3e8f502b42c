import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactapp import surface as s
from exactapp.core import (
    NAT_TYPE,
    App,
    FnCall,
    Ident,
    Lam,
    Pi,
    Var,
    alpha_eq,
    check_exactly_applied,
    numeral,
)
from exactapp.elaborate import check, elab_decls
from exactapp.reduce import (
    Reducer,
    StepLimitExceeded,
    convertible,
    delta_step,
    normalize,
    whnf,
)

from gen import TARGETS, WellTyped, core_type, oracle_convertible, typed_context


def unary(n: int):
    """Independent oracle: the numeral n built by hand."""
    t = FnCall("zero", ())
    for _ in range(n):
        t = FnCall("suc", (t,))
    return t


x, y, h = Ident.fresh("x"), Ident.fresh("y"), Ident.fresh("h")


def test_delta_primitive(sigs):
    assert delta_step(FnCall("plus", (numeral(2), numeral(3))), sigs) == unary(5)
    assert delta_step(FnCall("max", (numeral(2), numeral(3))), sigs) == unary(3)


def test_delta_stuck_on_variable(sigs):
    assert delta_step(FnCall("max", (Var(x), numeral(3))), sigs) is None


def test_delta_constructors_never_reduce(sigs):
    assert delta_step(FnCall("zero"), sigs) is None
    assert delta_step(FnCall("suc", (numeral(1),)), sigs) is None


def test_delta_defined_substitutes_body():
    sigs, errors = elab_decls(s.parse_file("def id (x : Nat) : Nat = x"))
    assert not errors
    u = Var(Ident.fresh("u"))
    assert delta_step(FnCall("id", (u,)), sigs) == u


def test_delta_rejects_corrupt_spine(sigs):
    with pytest.raises(AssertionError):
        delta_step(FnCall("max", (numeral(1),)), sigs)


def test_whnf(sigs):
    u = Var(Ident.fresh("u"))
    assert whnf(App(Lam(x, Var(x)), u), sigs) == u
    assert whnf(FnCall("plus", (numeral(1), numeral(1))), sigs) == unary(2)
    lam = Lam(y, FnCall("max", (u, Var(y))))
    assert whnf(lam, sigs) is lam


def test_whnf_leaves_arguments_alone(sigs):
    arg = App(Lam(x, Var(x)), numeral(1))
    t = App(Var(h), arg)
    assert whnf(t, sigs) is t


def test_normalize(sigs):
    t = FnCall("plus", (numeral(2), FnCall("max", (numeral(1), numeral(3)))))
    assert normalize(t, sigs) == unary(5)
    assert alpha_eq(normalize(Lam(x, App(Lam(y, Var(y)), Var(x))), sigs), Lam(x, Var(x)))
    assert normalize(Var(x), sigs) == Var(x)


def test_normalize_does_not_eta_contract(sigs):
    t = Lam(x, App(Var(h), Var(x)))
    assert normalize(t, sigs) == t


def test_step_limit(sigs):
    t = FnCall("plus", (numeral(1), FnCall("plus", (numeral(1), numeral(1)))))
    with pytest.raises(StepLimitExceeded):
        normalize(t, sigs, max_steps=1)
    assert normalize(t, sigs, max_steps=10) == unary(3)


@pytest.mark.parametrize("m", range(0, 31, 5))
@pytest.mark.parametrize("n", range(0, 31, 6))
def test_primitives_match_arithmetic(sigs, m, n):
    assert normalize(FnCall("plus", (numeral(m), numeral(n))), sigs) == unary(m + n)
    assert normalize(FnCall("max", (numeral(m), numeral(n))), sigs) == unary(max(m, n))


def test_convertible_eta(sigs):
    assert convertible(Lam(x, App(Var(h), Var(x))), Var(h), sigs)
    assert convertible(Var(h), Lam(x, App(Var(h), Var(x))), sigs)
    assert not convertible(Lam(x, App(Var(h), Var(x))), Var(x), sigs)


def test_convertible_alpha(sigs):
    assert convertible(Pi(x, NAT_TYPE, NAT_TYPE), Pi(y, NAT_TYPE, NAT_TYPE), sigs)
    assert not convertible(Pi(x, NAT_TYPE, Var(x)), Pi(y, NAT_TYPE, Var(x)), sigs)


def test_convertible_delta(sigs):
    assert convertible(FnCall("plus", (numeral(1), numeral(1))), numeral(2), sigs)
    assert not convertible(FnCall("plus", (numeral(1), numeral(1))), numeral(3), sigs)
    # stuck calls compare by spine
    a = FnCall("max", (Var(x), numeral(1)))
    assert convertible(a, FnCall("max", (Var(x), FnCall("plus", (numeral(0), numeral(1))))), sigs)
    assert not convertible(a, FnCall("plus", (Var(x), numeral(1))), sigs)


def test_convertible_unfolds_defined():
    sigs, errors = elab_decls(s.parse_file("def id (x : Nat) : Nat = x"))
    assert not errors
    assert convertible(FnCall("id", (Var(x),)), Var(x), sigs)
    assert convertible(FnCall("id", (Var(x),)), FnCall("id", (Var(x),)), sigs)
    assert not convertible(FnCall("id", (Var(x),)), Var(y), sigs)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _elaborated(test_sigs, seed):
    rng = random.Random(seed)
    ctx, env = typed_context(test_sigs)
    ty = rng.choice(TARGETS)
    e = WellTyped(rng).check(ty, 5, dict(env))
    return ctx, check(ctx, ctx.resolve(e), core_type(ty)), ty


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_normalize_idempotent_and_preserves_arity(test_sigs, seed):
    _, t, _ = _elaborated(test_sigs, seed)
    nf = normalize(t, test_sigs)
    assert alpha_eq(normalize(nf, test_sigs), nf)
    assert check_exactly_applied(nf, test_sigs) == []
    assert check_exactly_applied(whnf(t, test_sigs), test_sigs) == []


@settings(max_examples=150, deadline=None)
@given(seeds, seeds)
def test_convertible_agrees_with_normal_form_oracle(test_sigs, s1, s2):
    _, a, ta = _elaborated(test_sigs, s1)
    _, b, tb = _elaborated(test_sigs, s2)
    if ta != tb:
        b = a
    r = Reducer(test_sigs)
    assert r.convertible(a, b) == r.convertible(b, a) == oracle_convertible(a, b, test_sigs)
    assert r.convertible(a, normalize(a, test_sigs))
