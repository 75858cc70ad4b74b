"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad parity, failed
preconditions, ...), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import adgraph, afsw, dsl, hirzebruch, switch
from .exactring import GradedClass
from .kcalc import KClass

SCHEMA = 1


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _graph(text: str) -> adgraph.AdmissibleGraph:
    try:
        return adgraph.AdmissibleGraph.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad graph JSON {text!r}: {exc}")


def _render(value):
    if isinstance(value, (GradedClass, KClass)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_render(v) for v in value]
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fswitch", description="Exact family switching calculus")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit the JSON envelope")

    sw = sub.add_parser("switch", help="analyze switching L -> L + 2k PD(C)")
    sw.add_argument("--m", type=int, required=True)
    sw.add_argument("--n", type=int, required=True)
    sw.add_argument("--k", type=int, required=True)
    sw.add_argument("--with-u", action="store_true", help="model C = P(U) and report c(V)")
    sw.add_argument("--truncation", type=int, default=4)
    common(sw)

    hz = sub.add_parser("hirzebruch", help="line bundle cohomology on F_n")
    hsub = hz.add_subparsers(dest="op", required=True, parser_class=_Parser)
    for name in ("h0", "h1", "h2", "chi"):
        h = hsub.add_parser(name)
        h.add_argument("--n", type=int, required=True)
        h.add_argument("--a", type=int, required=True)
        h.add_argument("--b", type=int, required=True)
        common(h)
    cb = hsub.add_parser("chooseb", help="even twist b killing h0 and h2")
    cb.add_argument("--a", type=int, required=True)
    cb.add_argument("--n", type=int, required=True)
    common(cb)

    af = sub.add_parser("afsw", help="algebraic family invariants")
    asub = af.add_subparsers(dest="op", required=True, parser_class=_Parser)
    pure = asub.add_parser("pure", help="c_{dimB+q}(W - V) for a formal Kuranishi model")
    pure.add_argument("--dimb", type=int, required=True)
    pure.add_argument("--q", type=int, required=True)
    pure.add_argument("--rankv", type=int, required=True)
    pure.add_argument("--rankw", type=int, required=True)
    pure.add_argument("--pg", type=int, default=0)
    pure.add_argument("--febd", type=int, default=0)
    pure.add_argument("--use-febd", action="store_true")
    common(pure)
    ks = asub.add_parser("ksteps", help="classify the k-step pushforward terms")
    ks.add_argument("--degs", type=_int_list, required=True, help="d1,d2,... fiber degrees")
    common(ks)
    zero = asub.add_parser("zero", help="dimension gap forcing a local contribution to vanish")
    zero.add_argument("--e-sq", type=int, required=True)
    zero.add_argument("--e-dot-k", type=int, required=True)
    zero.add_argument("--e-dot-c", type=int, required=True)
    common(zero)

    gr = sub.add_parser("graphs", help="admissible graphs and their partial orders")
    gsub = gr.add_subparsers(dest="op", required=True, parser_class=_Parser)
    en = gsub.add_parser("enumerate")
    en.add_argument("--n", type=int, required=True)
    common(en)
    for name in ("compare", "interpolate"):
        g = gsub.add_parser(name)
        g.add_argument("--g", type=_graph, required=True, help='JSON like {"n":2,"edges":[[1,2]]}')
        g.add_argument("--g2", type=_graph, required=True)
        g.add_argument("--m", type=_int_list, required=True, help="multiplicities m1,...,mn")
        common(g)

    ev = sub.add_parser("eval", help="evaluate a class expression")
    ev.add_argument("expr")
    ev.add_argument("--bind", action="append", default=[], help="name=rank<k>[:roots a,b,...]; repeatable")
    ev.add_argument("--truncation", type=int, default=4)
    common(ev)
    return p


def _cmd_switch(args):
    base = switch.SwitchBase.standard(args.truncation) if args.with_u else None
    problem = switch.SwitchProblem(args.m, args.n, args.k, base)
    report = switch.analyze(problem)
    result = report.to_dict()
    if base is not None:
        result["sym_pieces"] = [p.to_dict() for p in switch.decompose_sym(problem)]
    return result, []


def _cmd_hirzebruch(args):
    if args.op == "chooseb":
        choice = hirzebruch.choose_b(args.a, args.n)
        d = choice.divisor
        result = {
            "b": choice.b,
            "recipe_b": choice.recipe_b,
            "recipe_ok": choice.recipe_ok,
            "divisor": {"n": d.n, "a": d.a, "b": d.b},
            "h0": hirzebruch.h0(d),
            "h2": hirzebruch.h2(d),
        }
        return result, list(choice.warnings)
    d = hirzebruch.FnDivisor(args.n, args.a, args.b)
    fn = getattr(hirzebruch, args.op)
    return {"divisor": {"n": d.n, "a": d.a, "b": d.b}, args.op: fn(d)}, []


def _cmd_afsw(args):
    if args.op == "pure":
        excess = args.febd if args.use_febd else args.pg
        half = args.rankv - args.rankw - excess + args.q - 1
        fam = afsw.FamilyData(args.dimb, args.q, args.pg, args.febd, 2 * half, 0)
        top = args.dimb + args.q
        ring = afsw.KuranishiModel.formal_ring(args.rankv, args.rankw, max(top, 1))
        model = afsw.KuranishiModel.formal(ring, args.rankv, args.rankw)
        value = afsw.afsw_pure(model, fam, use_febd=args.use_febd)
        chain = afsw.verify_cal_chain(model, fam, use_febd=args.use_febd)
        return {"degree": top, "class": value, "chain_verified": chain, "half_index": half}, []
    if args.op == "ksteps":
        steps = afsw.decompose_ksteps(len(args.degs), args.degs)
        return {"steps": [s.to_dict() for s in steps], "virtual_rank": afsw.ksteps_virtual_rank(steps)}, []
    gap = afsw.prop_zero_gap(args.e_sq, args.e_dot_k, args.e_dot_c)
    return {"gap": gap}, []


def _cmd_graphs(args):
    if args.op == "enumerate":
        graphs = adgraph.enumerate_admissible(args.n)
        return {"count": len(graphs), "graphs": [dict(g.to_dict(), codim=adgraph.codim(g)) for g in graphs]}, []
    g, g2 = args.g, args.g2
    ctx = adgraph.PairingContext(tuple(args.m))
    if args.op == "compare":
        return {
            "gt": adgraph.partial_gt(g, g2),
            "sqsupset": adgraph.partial_sqsupset(g, g2, ctx),
            "gg": adgraph.partial_gg(g, g2, ctx),
            "I": sorted(adgraph.negative_set(g, ctx)),
            "J": sorted(adgraph.negative_set(g2, ctx)),
            "special_condition": adgraph.special_condition(g, ctx),
        }, []
    return adgraph.find_intermediate(g, g2, ctx).to_dict(), []


def _cmd_eval(args):
    env = dsl.Environment.from_bindings(args.bind, args.truncation)
    value = dsl.evaluate(args.expr, env)
    kind = "kclass" if isinstance(value, KClass) else "class" if isinstance(value, GradedClass) else "number"
    return {"value": value, "kind": kind, "ring": str(env.ring)}, []


_COMMANDS = {
    "switch": _cmd_switch,
    "hirzebruch": _cmd_hirzebruch,
    "afsw": _cmd_afsw,
    "graphs": _cmd_graphs,
    "eval": _cmd_eval,
}

_ECHO_SKIP = {"json", "command", "op"}


def _human(command: str, result, warnings) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}{k}.", v[k])
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}{i}.", x)
        elif isinstance(v, list):
            lines.append(f"{prefix.rstrip('.')}: {', '.join(str(x) for x in v)}")
        else:
            lines.append(f"{prefix.rstrip('.')}: {v}")

    walk("", result)
    for w in warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.command + (f" {args.op}" if getattr(args, "op", None) else "")
    try:
        result, warnings = _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"fswitch {command}: error: {exc}", file=err)
        return 1
    result = _render(result)
    if args.json:
        inputs = {k: _render(v.to_dict() if hasattr(v, "to_dict") else v) for k, v in vars(args).items() if k not in _ECHO_SKIP}
        envelope = {"schema": SCHEMA, "command": command, "inputs": inputs, "result": result, "warnings": warnings}
        print(json.dumps(envelope, sort_keys=True, indent=2), file=out)
    else:
        print(_human(command, result, warnings), file=out)
    return 0


def main() -> None:
    sys.exit(run())
