"""Command-line driver.

    uctt solve FILE [-g GOAL] [--system rest|resy|star] [--depth N] [--trace]
    uctt tk FILE [-g GOAL] [--fuel N]
    uctt ictt FILE [-g GOAL] [--depth N]
    uctt member FILE -g GOAL [-s X=term ...]
    uctt compare FILE [--depth N] [--fuel N]

Queries come from -g or from the ``?- goal.`` lines of FILE.  Exit status:
0 success, 1 finite failure (or a disagreement for compare), 2 bounds
exhausted, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from uctt.binding import Substitution
from uctt.compare import three_way
from uctt.engine.core import DepthExhausted, State
from uctt.engine.search import SYSTEMS, SearchConfig, solve
from uctt.engine.trace import format_subst, format_trace
from uctt.semantics import Bounds, Evaluator
from uctt.sequent import prove_cut_free, sequent, to_sexpr
from uctt.syntax import SyntaxError_, parse, parse_goal, parse_term, print_term
from uctt.terms import free_vars

OK, FAIL, EXHAUSTED, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(args):
    try:
        with open(args.file, encoding="utf-8") as fh:
            src = parse(fh.read())
        goals = [parse_goal(args.goal, src.signature)] if args.goal else list(src.queries)
    except OSError as e:
        raise UsageError(str(e)) from None
    if not goals:
        raise UsageError("no query: give -g GOAL or put '?- goal.' in the file")
    return src, goals


def _universe(src, lvl: int = 0):
    return src.signature.universe(lvl)


def _combine(codes: list[int]) -> int:
    if any(c == EXHAUSTED for c in codes):
        return EXHAUSTED
    if any(c == FAIL for c in codes):
        return FAIL
    return OK


def cmd_solve(args) -> int:
    src, goals = _load(args)
    cfg = SearchConfig(args.system, args.depth, args.witness_size, args.max_solutions,
                       _universe(src))
    codes = []
    for g in goals:
        print(f"?- {print_term(g)}.")
        vars_ = sorted(free_vars(g), key=lambda s: s.name)
        found = 0
        try:
            for theta, d in solve(State(0, src.program, g), cfg):
                found += 1
                for x in vars_:
                    if x in theta:
                        print(f"{x.name} = {print_term(theta[x])}")
                if args.trace:
                    print(format_trace(d))
                print("yes.")
        except DepthExhausted:
            if not found:
                print("no (bounds exhausted).")
                codes.append(EXHAUSTED)
                continue
        if found:
            codes.append(OK)
        else:
            print("no.")
            codes.append(FAIL)
    return _combine(codes)


def cmd_tk(args) -> int:
    src, goals = _load(args)
    ev = Evaluator(Bounds(args.witness_size, _universe(src)))
    codes = []
    for g in goals:
        r = ev.ifix_query(0, src.program, g, args.fuel)
        t = ev.t_eval(args.fuel, 0, src.program, g)
        print(f"?- {print_term(g)}.")
        print(f"T^{args.fuel} = {t.name.lower()}")
        if r.status == "top":
            print(f"ifix = top (fuel {r.fuel})")
        else:
            print(f"ifix = {r.status}")
        codes.append({"top": OK, "bot": FAIL}.get(r.status, EXHAUSTED))
    return _combine(codes)


def cmd_ictt(args) -> int:
    src, goals = _load(args)
    codes = []
    for g in goals:
        s = sequent(src.program.formulas, g, 0)
        print(f"?- {print_term(g)}.")
        try:
            t = prove_cut_free(s, args.depth, args.witness_size, _universe(src))
        except DepthExhausted:
            print("unknown (bounds exhausted).")
            codes.append(EXHAUSTED)
            continue
        if t is None:
            print("not provable.")
            codes.append(FAIL)
        else:
            print(to_sexpr(t))
            codes.append(OK)
    return _combine(codes)


def _parse_binding(text: str, g, sig):
    name, sep, rhs = text.partition("=")
    name = name.strip()
    if not sep:
        raise UsageError(f"binding {text!r} is not of the form X=term")
    for x in free_vars(g):
        if x.name == name:
            return x, parse_term(rhs.strip(), sig, x.type)
    raise UsageError(f"{name} is not a free variable of the goal")


def cmd_member(args) -> int:
    from uctt.semantics import IllegalTheta, is_member

    src, goals = _load(args)
    codes = []
    for g in goals:
        theta = Substitution(dict(_parse_binding(b, g, src.signature) for b in args.subst))
        cfg = SearchConfig(args.system, args.depth, args.witness_size, 1, _universe(src))
        try:
            ok = is_member(theta, 0, src.program, g, cfg)
        except IllegalTheta as e:
            raise UsageError(str(e)) from None
        except DepthExhausted:
            print(f"{format_subst(theta)} : unknown (bounds exhausted).")
            codes.append(EXHAUSTED)
            continue
        print(f"{format_subst(theta)} {'in' if ok else 'not in'} I_s({print_term(g)})")
        codes.append(OK if ok else FAIL)
    return _combine(codes)


def cmd_compare(args) -> int:
    src, goals = _load(args)
    ev = Evaluator(Bounds(args.witness_size, _universe(src)))
    agree = disagree = undecided = 0
    for g in goals:
        v = three_way(src.program, g, 0, args.depth, args.fuel, args.witness_size,
                      _universe(src), ev, args.system)
        if not v.agree:
            mark = "DISAGREE"
            disagree += 1
        elif not v.decided:
            mark = "undecided"
            undecided += 1
        else:
            mark = "agree"
            agree += 1
        print(f"{mark}  {v}  ?- {print_term(g)}.")
    print(f"{agree} agree, {disagree} disagree, {undecided} undecided")
    return FAIL if disagree else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="uctt", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, hint in (
        ("solve", cmd_solve, "run resolution"),
        ("tk", cmd_tk, "evaluate the T operator and its least fixed point"),
        ("ictt", cmd_ictt, "search for a cut-free proof"),
        ("member", cmd_member, "test substitution-semantics membership"),
        ("compare", cmd_compare, "three-way agreement on the file's queries"),
    ):
        p = sub.add_parser(name, help=hint)
        p.set_defaults(func=fn)
        p.add_argument("file")
        p.add_argument("-g", "--goal")
        p.add_argument("--system", choices=SYSTEMS, default="rest")
        p.add_argument("--depth", type=int, default=8)
        p.add_argument("--witness-size", type=int, default=4)
        p.add_argument("--fuel", type=int, default=8)
        p.add_argument("--max-solutions", type=int, default=1)
        p.add_argument("--trace", action="store_true")
        if name == "member":
            p.add_argument("-s", "--subst", action="append", default=[], metavar="X=term")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else USAGE
    if args.depth < 1 or args.fuel < 0 or args.witness_size < 0 or args.max_solutions < 1:
        print("uctt: bounds must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, SyntaxError_) as e:
        print(f"uctt: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
