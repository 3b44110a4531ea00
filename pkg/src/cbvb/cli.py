"""Command line front end: ``cbvb <command> [options] ARGS``.

Exit codes: 0 success or equal, 1 definite negative answer, 2 inconclusive
or unknown, 3 parse or usage error.  ``--json`` prints exactly one JSON
document on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .approx import BTStatus, Verdict, boehm_tree, is_approximant_of
from .corpus import corpus, resolve
from .reduction import LeftmostOutermost, RandomSeeded, Status, classify_nf, reduce
from .resource import Deterministic, r_normalize
from .syntax import (
    ParseError, parse_resource, parse_termset, parse_termset_lines,
    render_tree, show, show_set, to_json,
)
from .taylor import (
    Ambiguous, Bounds, NotAClique, check_commutation, coherent, in_taylor,
    infer_term, is_clique, normalized_taylor_of_bt, taylor, taylor_nf,
)
from .terms import HeadContext, plug_head_context

OK, NO, UNSURE, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--fuel", type=int, default=500, help="reduction steps allowed (default 500)")
    g.add_argument("--max-bag", type=int, default=2, help="largest bag enumerated (default 2)")
    g.add_argument("--max-height", type=int, default=8, help="largest height enumerated (default 8)")
    g.add_argument("--depth", type=int, default=None, help="cut Böhm trees below this depth")
    g.add_argument("--strategy", choices=("lmo", "random"), default="lmo")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--json", action="store_true", help="print one JSON document")
    g.add_argument("--unicode", action="store_true", help="print λ and ⊥")
    return p


def _filter_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--filter-bag", type=int, default=None,
                   help="largest bag kept in the result (default: --max-bag)")
    p.add_argument("--filter-height", type=int, default=None,
                   help="largest height kept in the result (default: --max-height)")


def _set_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("set", nargs="?", help="'{ t1 ; t2 }' or a single term")
    p.add_argument("--file", help="read the set from a file, one term per line")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="cbvb", description="Call-by-value λ-calculus, Böhm trees and Taylor expansion.")
    parser.add_argument("--version", action="version", version=f"cbvb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common], description=help)

    p = cmd("parse", "parse a term and print it canonically")
    p.add_argument("term")
    p.add_argument("--resource", action="store_true", help="parse a resource term")

    p = cmd("reduce", "reduce with the chosen strategy")
    p.add_argument("term")
    p.add_argument("--trace", action="store_true", help="print every intermediate term")

    p = cmd("nf", "normal form and its grammar class")
    p.add_argument("term")

    p = cmd("bt", "Böhm tree prefix reached within the fuel")
    p.add_argument("term")
    p.add_argument("--figure", help="also draw the tree into this image file")

    p = cmd("approx-of", "is the first term an approximant of the second")
    p.add_argument("approximant")
    p.add_argument("term")

    p = cmd("taylor", "bounded Taylor expansion")
    p.add_argument("term")

    p = cmd("in-taylor", "membership of a resource term in a Taylor expansion")
    p.add_argument("resource")
    p.add_argument("term")

    p = cmd("rnf", "normal form of a set of resource terms")
    _set_opts(p)

    p = cmd("coherent", "coherence of two resource terms")
    p.add_argument("left")
    p.add_argument("right")

    p = cmd("clique", "are the terms of a set pairwise coherent")
    _set_opts(p)

    p = cmd("infer", "a λ-term whose expansion contains the set")
    _set_opts(p)

    p = cmd("taylor-nf", "normal form of the bounded Taylor expansion")
    p.add_argument("term")
    _filter_opts(p)

    p = cmd("tn-bt", "normalised Taylor expansion of the Böhm tree")
    p.add_argument("term")

    p = cmd("check-theorem", "compare the two sides of the commutation theorem")
    p.add_argument("term")
    _filter_opts(p)
    p.add_argument("--figure", help="also draw a bar chart of both sides into this image file")

    p = cmd("ctx-check", "compare expansions of two terms inside a head context")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--bind", action="append", default=[], metavar="NAME",
                   help="context binder, repeatable, outermost first")
    p.add_argument("--arg", action="append", default=[], metavar="VALUE",
                   help="value argument, repeatable, leftmost first")
    _filter_opts(p)
    return parser


# ----------------------------------------------------------------------------

class _Out:
    def __init__(self, args):
        self.json = args.json
        self.unicode = args.unicode

    def term(self, t) -> str:
        return show(t, unicode=self.unicode)

    def set(self, es) -> str:
        return show_set(es, unicode=self.unicode)


def _bounds(args) -> Bounds:
    return Bounds(args.max_bag, args.max_height)


def _filter(args) -> Bounds:
    fb = args.max_bag if args.filter_bag is None else args.filter_bag
    fh = args.max_height if args.filter_height is None else args.filter_height
    return Bounds(fb, fh)


def _strategy(args):
    return RandomSeeded(args.seed) if args.strategy == "random" else LeftmostOutermost()


def _read_set(args):
    if args.file is not None:
        if args.set is not None:
            raise UsageError("give either a set or --file, not both")
        try:
            text = Path(args.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        return parse_termset_lines(text)
    if args.set is None:
        raise UsageError("a set or --file is required")
    return parse_termset(args.set)


def _emit(out: _Out, doc: dict, text: str) -> None:
    if out.json:
        print(json.dumps(doc, ensure_ascii=False))
    else:
        print(text)


def _set_json(es) -> list:
    return [to_json(e) for e in es]


def run_parse(args, out):
    t = parse_resource(args.term) if args.resource else resolve(args.term)
    _emit(out, {"term": to_json(t), "text": out.term(t)}, out.term(t))
    return OK


def run_reduce(args, out):
    m = resolve(args.term)
    r = reduce(m, _strategy(args), args.fuel, trace=args.trace)
    doc = {"term": to_json(r.term), "text": out.term(r.term), "steps": r.steps_used,
           "status": r.status.value}
    if r.trace is not None:
        doc["trace"] = [out.term(t) for t in r.trace]
        text = "\n".join(doc["trace"])
    else:
        text = out.term(r.term)
    _emit(out, doc, text)
    return OK if r.status is Status.NORMAL_FORM else UNSURE


def run_nf(args, out):
    m = resolve(args.term)
    r = reduce(m, _strategy(args), args.fuel)
    cls = classify_nf(r.term)
    doc = {"term": to_json(r.term), "text": out.term(r.term), "steps": r.steps_used,
           "status": r.status.value, "class": cls.value}
    _emit(out, doc, f"{out.term(r.term)}\n{r.status.value} {cls.value} after {r.steps_used} steps")
    return OK if r.status is Status.NORMAL_FORM else UNSURE


def run_bt(args, out):
    m = resolve(args.term)
    bt = boehm_tree(m, args.fuel, args.depth)
    if args.figure:
        from .plotting import plot_bt
        plot_bt(bt, args.figure)
    if out.json:
        doc = json.loads(render_tree(bt, "json"))
        doc["steps"] = bt.steps
        print(json.dumps(doc, ensure_ascii=False))
    else:
        print(render_tree(bt))
        print(f"status: {bt.status.value}")
    return OK if bt.status is BTStatus.EXACT else UNSURE


def run_approx_of(args, out):
    a, m = resolve(args.approximant), resolve(args.term)
    v = is_approximant_of(a, m, args.fuel)
    _emit(out, {"verdict": v.value}, v.value)
    return OK if v is Verdict.YES else UNSURE


def run_taylor(args, out):
    es = taylor(resolve(args.term), _bounds(args))
    _emit(out, {"elements": _set_json(es.elems), "count": len(es)}, out.set(es.elems))
    return OK


def run_in_taylor(args, out):
    t, m = parse_resource(args.resource), resolve(args.term)
    yes = in_taylor(t, m)
    _emit(out, {"member": yes}, str(yes).lower())
    return OK if yes else NO


def run_rnf(args, out):
    es = _read_set(args)
    order = RandomSeeded(args.seed) if args.strategy == "random" else Deterministic()
    nf = r_normalize(es.elems, order)
    _emit(out, {"elements": _set_json(nf.elems), "count": len(nf)}, out.set(nf.elems))
    return OK


def run_coherent(args, out):
    yes = coherent(parse_resource(args.left), parse_resource(args.right))
    _emit(out, {"coherent": yes}, str(yes).lower())
    return OK if yes else NO


def run_clique(args, out):
    yes = is_clique(_read_set(args).elems)
    _emit(out, {"clique": yes}, str(yes).lower())
    return OK if yes else NO


def run_infer(args, out):
    es = _read_set(args)
    try:
        m = infer_term(es.elems)
    except NotAClique:
        _emit(out, {"result": "NotAClique"}, "NotAClique")
        return NO
    except Ambiguous as exc:
        where = list(exc.position)
        _emit(out, {"result": "Ambiguous", "position": where}, f"Ambiguous at {where}")
        return UNSURE
    _emit(out, {"result": "term", "term": to_json(m), "text": out.term(m)}, out.term(m))
    return OK


def run_taylor_nf(args, out):
    es, saturated = taylor_nf(resolve(args.term), _bounds(args), _filter(args))
    doc = {"elements": _set_json(es.elems), "count": len(es), "saturated": saturated}
    _emit(out, doc, f"{out.set(es.elems)}\nsaturated: {str(saturated).lower()}")
    return OK if saturated else UNSURE


def run_tn_bt(args, out):
    es, status = normalized_taylor_of_bt(resolve(args.term), args.fuel, _bounds(args))
    doc = {"elements": _set_json(es.elems), "count": len(es), "bt_status": status.value}
    _emit(out, doc, f"{out.set(es.elems)}\nstatus: {status.value}")
    return OK if status is BTStatus.EXACT else UNSURE


def _report_json(r) -> dict:
    f = r.filter
    return {
        "left": _set_json(r.left.elems),
        "right": _set_json(r.right.elems),
        "filter": {"max_bag": f.max_bag, "max_height": f.max_height},
        "bt_status": r.bt_status.value,
        "equal": r.equal,
        "witnesses": _set_json(r.witnesses.elems),
        "saturated": r.saturated,
        "verdict": r.verdict,
    }


def run_check_theorem(args, out):
    r = check_commutation(resolve(args.term), args.fuel, _bounds(args), _filter(args))
    if args.figure:
        from .plotting import plot_commutation
        plot_commutation(r, args.figure)
    lines = [
        r.verdict,
        f"left:  {out.set(r.left.elems)}",
        f"right: {out.set(r.right.elems)}",
        f"bt_status: {r.bt_status.value}  saturated: {str(r.saturated).lower()}",
    ]
    if not r.equal:
        lines.append(f"left only:  {out.set(r.left_only.elems)}")
        lines.append(f"right only: {out.set(r.right_only.elems)}")
    _emit(out, _report_json(r), "\n".join(lines))
    return {"equal": OK, "mismatch": NO}.get(r.verdict, UNSURE)


def run_ctx_check(args, out):
    m, n = resolve(args.left), resolve(args.right)
    ctx = HeadContext(tuple(args.bind), tuple(resolve(a) for a in args.arg))
    b, f = _bounds(args), _filter(args)
    left, sat_l = taylor_nf(plug_head_context(ctx, m), b, f)
    right, sat_r = taylor_nf(plug_head_context(ctx, n), b, f)
    same = left == right
    doc = {"agree": same, "saturated": sat_l and sat_r,
           "left": _set_json(left.elems), "right": _set_json(right.elems)}
    _emit(out, doc, f"{str(same).lower()}\nsaturated: {str(sat_l and sat_r).lower()}")
    if same:
        return OK
    return NO if sat_l and sat_r else UNSURE


COMMANDS = {
    "parse": run_parse, "reduce": run_reduce, "nf": run_nf, "bt": run_bt,
    "approx-of": run_approx_of, "taylor": run_taylor, "in-taylor": run_in_taylor,
    "rnf": run_rnf, "coherent": run_coherent, "clique": run_clique, "infer": run_infer,
    "taylor-nf": run_taylor_nf, "tn-bt": run_tn_bt, "check-theorem": run_check_theorem,
    "ctx-check": run_ctx_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("fuel", "max_bag", "max_height"):
        if getattr(args, name) < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    try:
        corpus()  # a broken CBVB_CORPUS file is reported up front
        return COMMANDS[args.command](args, _Out(args))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, ValueError) as exc:
        # ValueError covers NonValueArg and bounds that do not fit
        print(f"error: {exc}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
