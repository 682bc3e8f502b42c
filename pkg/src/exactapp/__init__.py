"""A small dependently typed core language whose function calls always carry
exactly as many arguments as the function declares, with a bidirectional
elaborator from curried surface syntax."""

from .core import (
    App,
    Defined,
    FnCall,
    Ident,
    Lam,
    Param,
    Pi,
    Primitive,
    Signature,
    Substitution,
    Var,
    Violation,
    alpha_eq,
    apply,
    check_exactly_applied,
    gen_lam,
    numeral,
    substitute,
    vars_of,
)
from .elaborate import Context, ElabError, check, elab_decls, infer, prelude
from .printer import parse_term, pretty
from .reduce import convertible, delta_step, normalize, whnf
from .surface import parse_expr, parse_file, parse_type, resolve
