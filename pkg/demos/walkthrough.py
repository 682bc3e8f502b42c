"""Walk through elaboration of function references, partial application,
over-application, and reduction.

Run with ``python demos/walkthrough.py``.
"""

from exactapp import Context, check_exactly_applied, normalize, parse_expr, pretty, prelude
from exactapp.core import NAT_TYPE, numeral
from exactapp.elaborate import elab_decls, elaborate_expr
from exactapp.surface import parse_file

sigs = prelude()
ctx = Context(sigs)

# A bare function reference becomes a lambda around a call that already has
# all of its arguments.
term, ty = elaborate_expr(ctx, parse_expr("max"))
print("max        =>", pretty(term), ":", pretty(ty))

# Supplying one argument substitutes into that lambda; the call inside is
# still exactly-applied.
ctx_m, _ = ctx.extend("m", NAT_TYPE)
term, ty = elaborate_expr(ctx_m, parse_expr("max m"))
print("max m      =>", pretty(term), ":", pretty(ty))

# Arguments past the declared parameters become binary applications around
# the call.
sigs2, errors = elab_decls(
    parse_file("def f (a : Nat) (b : Nat) : Nat -> Nat -> Nat primitive opaque")
)
assert not errors
ctx2 = Context(sigs2)
for name in ["u1", "u2", "u3", "u4"]:
    ctx2, _ = ctx2.extend(name, NAT_TYPE)
term, ty = elaborate_expr(ctx2, parse_expr("f u1 u2 u3 u4"))
print("f u1..u4   =>", pretty(term), ":", pretty(ty))
print("violations =>", check_exactly_applied(term, sigs2))

# Primitive calls reduce once their arguments are numerals.
term, _ = elaborate_expr(ctx, parse_expr("plus 2 (max 1 3)"))
print("plus 2 (max 1 3) ~>", pretty(normalize(term, sigs)))
assert normalize(term, sigs) == numeral(5)
