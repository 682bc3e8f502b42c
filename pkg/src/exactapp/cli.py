"""Command-line driver.

    exactapp elab FILE --expr TEXT
    exactapp check FILE --expr TEXT --type TEXT
    exactapp norm FILE --expr TEXT [--max-steps N]
    exactapp verify FILE

Exit codes: 0 success, 1 user or type error, 2 reduction step limit.
"""

from __future__ import annotations

import argparse
import functools
import sys
from typing import Optional, Sequence, TextIO

from . import surface as s
from .core import check_signature
from .elaborate import (
    Context,
    ElabError,
    check,
    declaration_names,
    elab_decls,
    elab_type,
    infer,
)
from .printer import pretty
from .reduce import StepLimitExceeded


class Failure(Exception):
    def __init__(self, code: int, lines: list[str]):
        super().__init__("\n".join(lines))
        self.code = code
        self.lines = lines


def _diag(file: str, err) -> str:
    kind = getattr(err, "kind", type(err).__name__)
    decl = getattr(err, "decl", None)
    where = f" in {decl}" if decl else ""
    return f"{file}:{err.loc.line}:{err.loc.col}: error: {kind}{where}: {err.message}"


def _load(path: str) -> tuple[dict, list[s.Declaration]]:
    try:
        with open(path, encoding="utf-8") as f:
            src = f.read()
    except OSError as err:
        raise Failure(1, [f"{path}:0:0: error: IOError: {err.strerror}"])
    try:
        decls = s.parse_file(src)
    except s.SurfaceError as err:
        raise Failure(1, [_diag(path, err)])
    sigs, errors = elab_decls(decls)
    if errors:
        raise Failure(1, [_diag(path, e) for e in errors])
    return sigs, decls


def _expr_text(args, stdin: TextIO) -> str:
    return stdin.read() if args.expr == "-" else args.expr


def _parse_expr(ctx: Context, text: str, err: TextIO, show_resolved: bool) -> s.Expr:
    try:
        e = ctx.resolve(s.parse_expr(text))
    except s.SurfaceError as exc:
        raise Failure(1, [_diag("<expr>", exc)])
    if show_resolved:
        print(f"resolved: {_dump(e)}", file=err)
    return e


def _dump(e: s.Expr) -> str:
    match e:
        case s.FnRef(name):
            return f"FnRef({name})"
        case s.LocalRef(name):
            return f"LocalRef({name})"
        case s.SApp(f, a):
            return f"SApp({_dump(f)}, {_dump(a)})"
        case s.SLam(x, body):
            return f"SLam({x}, {_dump(body)})"
    return repr(e)


def cmd_elab(args, out: TextIO, err: TextIO, stdin: TextIO):
    sigs, _ = _load(args.file)
    ctx = Context(sigs)
    e = _parse_expr(ctx, _expr_text(args, stdin), err, args.print_resolved)
    try:
        u, ty = infer(ctx, e)
    except ElabError as exc:
        raise Failure(1, [_diag("<expr>", exc)])
    out.write(f"{pretty(u)}\n: {pretty(ty)}\n")


def cmd_check(args, out: TextIO, err: TextIO, stdin: TextIO):
    sigs, _ = _load(args.file)
    ctx = Context(sigs)
    try:
        ty = elab_type(ctx, s.parse_type(args.type))
    except (s.SurfaceError, ElabError) as exc:
        raise Failure(1, [_diag("<type>", exc)])
    e = _parse_expr(ctx, _expr_text(args, stdin), err, args.print_resolved)
    try:
        u = check(ctx, e, ty)
    except ElabError as exc:
        raise Failure(1, [_diag("<expr>", exc)])
    out.write(f"{pretty(u)}\n")


def cmd_norm(args, out: TextIO, err: TextIO, stdin: TextIO):
    sigs, _ = _load(args.file)
    ctx = Context(sigs, max_steps=args.max_steps)
    e = _parse_expr(ctx, _expr_text(args, stdin), err, args.print_resolved)
    try:
        u, _ = infer(ctx, e)
        nf = ctx.reducer().normalize(u)
    except ElabError as exc:
        raise Failure(1, [_diag("<expr>", exc)])
    except StepLimitExceeded as exc:
        raise Failure(2, [f"<expr>:1:1: error: StepLimit: {exc}"])
    out.write(f"{pretty(nf)}\n")


def cmd_verify(args, out: TextIO, err: TextIO, stdin: TextIO):
    sigs, decls = _load(args.file)
    if args.print_resolved:
        for d in decls:
            if d.body is not None:
                body = s.resolve(d.body, sigs, [x for x, _ in d.params])
                print(f"resolved {d.name}: {_dump(body)}", file=err)
    report = []
    names = declaration_names(sigs)
    for name in names:
        report += [f"{name}: {v}" for v in check_signature(sigs[name], sigs)]
    if report:
        raise Failure(1, report)
    out.write(f"OK {len(names)} declarations\n")


@functools.lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--print-resolved",
        action="store_true",
        default=argparse.SUPPRESS,
        help="dump the resolved surface tree to stderr",
    )
    parser = argparse.ArgumentParser(
        prog="exactapp", description="Elaborate and run exactly-applied core terms."
    )
    parser.add_argument("--print-resolved", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("elab", parents=[common], help="elaborate and infer a type")
    p.add_argument("file")
    p.add_argument("--expr", required=True)
    p.set_defaults(run=cmd_elab)

    p = sub.add_parser("check", parents=[common], help="check an expression against a type")
    p.add_argument("file")
    p.add_argument("--expr", required=True)
    p.add_argument("--type", required=True)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("norm", parents=[common], help="elaborate and normalize")
    p.add_argument("file")
    p.add_argument("--expr", required=True)
    p.add_argument("--max-steps", type=int, default=None)
    p.set_defaults(run=cmd_norm)

    p = sub.add_parser("verify", parents=[common], help="check every call is exactly-applied")
    p.add_argument("file")
    p.set_defaults(run=cmd_verify)
    return parser


def main(
    argv: Optional[Sequence[str]] = None,
    out: TextIO = None,
    err: TextIO = None,
    stdin: TextIO = None,
) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stdin = stdin or sys.stdin
    args = build_parser().parse_args(argv)
    try:
        args.run(args, out, err, stdin)
    except Failure as f:
        for line in f.lines:
            print(line, file=err)
        return f.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
