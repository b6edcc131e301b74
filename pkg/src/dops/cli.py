"""Command-line front end.

    dops check      --arrangement A --op T
    dops basis      --arrangement A --order m
    dops decompose  --arrangement A --op T [--order m]
    dops apply      --op T --poly f
    dops star       --op T (--h h | --arrangement A)
    dops euler      --order m
    dops li         --arrangement A --index i (--op T | --order m)
    dops project-ei --arrangement A --index i --op T
    dops grtest     --arrangement A --max-order M [--index i]

Exit codes: 0 success, 1 parse error, 2 domain error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import arrangement as arr
from . import chain
from .errors import DopsError, InternalInconsistency, ParseError
from .text import format_op, format_poly, parse_op, parse_poly
from .weyl import conjugate_star, op_apply, op_order, op_totdeg

VERBS = ("check", "basis", "decompose", "apply", "star", "euler", "li", "project-ei", "grtest")


class UsageError(DopsError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dops",
        description="Exact computations with differential operators preserving a line arrangement.",
    )
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--arrangement", metavar="PATH")
    parser.add_argument("--op", metavar="EXPR")
    parser.add_argument("--poly", metavar="EXPR")
    parser.add_argument("--order", type=int, metavar="M")
    parser.add_argument("--index", type=int, metavar="I")
    parser.add_argument("--max-order", type=int, metavar="M", dest="max_order")
    parser.add_argument("--h", metavar="EXPR")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.verb} needs --{name.replace('_', '-')}")


class _Inputs:
    """Everything parsed up front, before any computation runs."""

    def __init__(self, args):
        self.A = arr.load_arrangement(args.arrangement) if args.arrangement else None
        self.op = parse_op(args.op) if args.op is not None else None
        self.poly = parse_poly(args.poly) if args.poly is not None else None
        self.h = parse_poly(args.h) if args.h is not None else None


def _paint(text, code, enabled):
    return f"\x1b[{code}m{text}\x1b[0m" if enabled else text


# Each command returns (text lines, json payload).


def cmd_check(args, inp, color):
    _need(args, "arrangement", "op")
    member = arr.in_DI(inp.op, inp.A)
    order = op_order(inp.op)
    totdeg = op_totdeg(inp.op)
    word = "member of D(I)" if member else "not a member of D(I)"
    word = _paint(word, "32" if member else "31", color)
    return [f"{word}; order {order}; totdeg {totdeg}"], {
        "member": member,
        "order": order,
        "totdeg": totdeg,
    }


def cmd_basis(args, inp, color):
    _need(args, "arrangement", "order")
    basis = arr.basis_Dm(inp.A, args.order)
    lines = [f"{b.label}: {format_op(b.op)}" for b in basis]
    payload = {"order": args.order, "basis": [{"label": b.label, "op": format_op(b.op)} for b in basis]}
    return lines, payload


def cmd_decompose(args, inp, color):
    _need(args, "arrangement", "op")
    m = args.order if args.order is not None else op_order(inp.op)
    pairs = arr.decompose(inp.op, inp.A, m)
    lines = [f"{b.label}: {format_poly(c)}" for b, c in pairs]
    payload = {
        "order": m,
        "coefficients": [{"label": b.label, "coefficient": format_poly(c)} for b, c in pairs],
    }
    return lines, payload


def cmd_apply(args, inp, color):
    _need(args, "op", "poly")
    out = format_poly(op_apply(inp.op, inp.poly))
    return [out], {"result": out}


def cmd_star(args, inp, color):
    _need(args, "op")
    if inp.h is not None:
        out = conjugate_star(inp.op, inp.h)
    elif inp.A is not None:
        out = conjugate_star(inp.op, inp.A.Q, factors=inp.A.polys)
    else:
        raise UsageError("star needs --h or --arrangement")
    s = format_op(out)
    return [s], {"result": s}


def cmd_euler(args, inp, color):
    _need(args, "order")
    s = format_op(arr.euler_op(args.order))
    return [s], {"order": args.order, "result": s}


def cmd_li(args, inp, color):
    _need(args, "arrangement", "index")
    if inp.op is not None:
        member = chain.in_Li(inp.op, inp.A, args.index)
        word = f"member of L_{args.index}" if member else f"not a member of L_{args.index}"
        return [_paint(word, "32" if member else "31", color)], {
            "index": args.index,
            "member": member,
        }
    _need(args, "order")
    gens = [format_op(g) for g in chain.basis_Lim(inp.A, args.index, args.order)]
    return gens, {"index": args.index, "order": args.order, "basis": gens}


def cmd_project_ei(args, inp, color):
    _need(args, "arrangement", "index", "op")
    e = chain.project_Ei(inp.op, inp.A, args.index)
    payload = {
        "index": e.i,
        "generator": e.gen_var,
        "terms": [{"alpha": a, "m": m, "coefficient": str(c)} for (a, m), c in e.items()],
        "exp": None,
    }
    lines = [str(e)]
    if not e.is_zero():
        p = chain.exp_of(e, inp.A.r)
        payload["exp"] = [p.k, p.m]
        lines.append(f"exp {p}")
    return lines, payload


def cmd_grtest(args, inp, color):
    _need(args, "arrangement", "max_order")
    i = args.index if args.index is not None else 1
    certs = chain.gr_not_fg_witness(inp.A, i, args.max_order)
    lines = []
    for c in certs:
        line = c.to_text()
        if color:
            line = line.replace(f"status={c.status}", "status=" + _paint(c.status, "32", True))
        lines.append(line)
    return lines, {"index": i, "certificates": [c.to_dict() for c in certs]}


COMMANDS = {
    "check": cmd_check,
    "basis": cmd_basis,
    "decompose": cmd_decompose,
    "apply": cmd_apply,
    "star": cmd_star,
    "euler": cmd_euler,
    "li": cmd_li,
    "project-ei": cmd_project_ei,
    "grtest": cmd_grtest,
}


def _use_color(stream) -> bool:
    mode = os.environ.get("DOPS_COLOR", "auto")
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        inp = _Inputs(args)
        color = args.format == "text" and _use_color(stdout)
        lines, payload = COMMANDS[args.verb](args, inp, color)
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 1
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=stderr)
        return 3
    except (DopsError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    if args.format == "json":
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stdout.write("".join(line + "\n" for line in lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
