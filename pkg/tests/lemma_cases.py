"""Generated applications of the derivation transformations.

Each case is a triple (lemma name, thunk, expectation).  The thunk runs the
transformation; the expectation checks the endpoints, flatness and length of
its result.  Inputs come from the random corpus: identity-answer derivations
found by search, answer derivations of opened goals, generic-step tails and
the outputs of other transformations.
"""

from __future__ import annotations

import random

from support import open_goal, tail
from uctt.binding import ConstantReplacer, Substitution, fresh_const, fresh_var, swap_renaming
from uctt.corpus import generate
from uctt.engine import (
    DepthExhausted, Derivation, SearchConfig, State, check_derivation, generic_to_instance,
    id_success, instance_to_generic, instantiate, level_increase, level_reduce, product,
    rename_consts, rename_vars, replace_const_by_var, solve, specialize, specialize_by,
    weaken_program,
)
from uctt.engine.core import vector_consts, vector_vars
from uctt.engine.lemmas import avoid_consts, avoid_vars, introduced_consts, introduced_vars
from uctt.syntax import parse_clause
from uctt.terms import Const, Var, constants, replace_syms

LEMMAS = (
    "instantiate", "specialize", "specialize_by", "rename_vars", "rename_consts", "avoid_vars",
    "avoid_consts", "replace_const_by_var", "level_reduce", "level_increase", "weaken_program",
    "product", "generic_to_instance", "instance_to_generic",
)


def ok_identity(d: Derivation) -> bool:
    return check_derivation(d).ok and d.successful and d.answer.is_identity()


def same_vector(v, w) -> bool:
    return tuple(v) == tuple(w)


class Source:
    """Derivations harvested from the corpus."""

    def __init__(self, n_pairs: int, seed: int, depth: int = 8):
        self.ids: list[Derivation] = []
        self.answers: list[Derivation] = []
        self.sig = None
        for pair in generate(n_pairs, seed):
            sig, prog, g = pair.load()
            self.sig = sig
            cfg = SearchConfig("resy", depth, 3, 1, sig.universe(0))
            o = id_success(State(0, prog, g), cfg)
            if o.answers:
                self.ids.append(o.answers[0][1])
            g = open_goal(g)
            for c in sorted(constants(g) & {sig.consts["a"], sig.consts["b"]}, key=str):
                g = replace_syms(g, {c: Var(fresh_var(0, c.type, "X"))})
                break
            v = State(0, prog, g)
            if v.free_vars:
                try:
                    for _, d in solve(v, SearchConfig("resy", depth, 3, 2, sig.universe(0))):
                        self.answers.append(d)
                except DepthExhausted:
                    pass
        self.a = self.sig.consts["a"]
        self.b = self.sig.consts["b"]

    def generic_tails(self):
        """Tails starting right after a generic step, on a single state."""
        for d in self.ids:
            f = instantiate(d)
            for n, (st, v) in enumerate(f.steps):
                if st.rule == "generic" and len(v) == 1 and v[0].index == 1:
                    yield tail(f, n + 1), st.const


def cases(src: Source, rng: random.Random):
    """Yield (lemma, thunk, expectation) triples."""
    a, b = src.a, src.b

    for d in src.answers + src.ids:
        def run(d=d):
            return instantiate(d)

        def want(r, d=d):
            exp = tuple(s.subst(d.answer) for s in d.initial)
            return ok_identity(r) and r.is_flat() and same_vector(r.initial, exp) and len(r) <= len(d)
        yield "instantiate", run, want

    opened = []
    for d in src.ids:
        f = instantiate(d)
        assert ok_identity(f) and f.is_flat()
        ground = [c for c in vector_consts(f.initial) if c in (a, b)]
        x = fresh_var(0, a.type, "X")
        for c in ground:
            def run(f=f, c=c, x=x):
                return replace_const_by_var(f, c, x)

            def want(r, f=f, c=c, x=x):
                exp = tuple(State(s.index, s.program.map(lambda t: replace_syms(t, {c: Var(x)})),
                                  replace_syms(s.goal, {c: Var(x)})) for s in f.initial)
                return ok_identity(r) and same_vector(r.initial, exp)
            yield "replace_const_by_var", run, want
        if ground and len(opened) < 400:
            c = rng.choice(ground)
            opened.append((replace_const_by_var(f, c, x), x))

        ys = list(introduced_vars(f))
        if ys:
            def run(f=f, ys=ys):
                return avoid_vars(f, ys)

            def want(r, f=f, ys=ys):
                return (ok_identity(r) and same_vector(r.initial, f.initial)
                        and not (introduced_vars(r) & set(ys)) and len(r) == len(f))
            yield "avoid_vars", run, want
        ks = list(introduced_consts(f))
        if ks:
            def run(f=f, ks=ks):
                return avoid_consts(f, ks)

            def want(r, f=f, ks=ks):
                return (ok_identity(r) and same_vector(r.initial, f.initial)
                        and not (introduced_consts(r) & set(ks)) and len(r) == len(f))
            yield "avoid_consts", run, want

        xi = ConstantReplacer({a: b, b: a})

        def run(f=f, xi=xi):
            return rename_consts(f, xi)

        def want(r, f=f):
            sw = {a: Const(b), b: Const(a)}
            exp = tuple(State(s.index, s.program.map(lambda t: replace_syms(t, sw)),
                              replace_syms(s.goal, sw)) for s in f.initial)
            return ok_identity(r) and same_vector(r.initial, exp) and len(r) == len(f)
        yield "rename_consts", run, want

        def run(f=f):
            return level_increase(f)

        def want(r, f=f):
            return (ok_identity(r) and r.is_flat() and len(r) == len(f)
                    and [s.index for s in r.initial] == [s.index + 1 for s in f.initial]
                    and [s.goal for s in r.initial] == [s.goal for s in f.initial])
        yield "level_increase", run, want

        up = level_increase(f)

        def run(up=up):
            return level_reduce(up)

        def want(r, f=f):
            return (ok_identity(r) and r.is_flat() and len(r) == len(f)
                    and [s.index for s in r.initial] == [s.index for s in f.initial])
        yield "level_reduce", run, want

        extra = parse_clause(rng.choice(["r a", "s a b", "p :- q", "pi x:i\\ (r x :- p)"]), src.sig)

        def run(f=f, extra=extra):
            return weaken_program(f, list(f.initial[0].program.formulas) + [extra])

        def want(r, f=f, extra=extra):
            s0 = r.initial[0]
            return (ok_identity(r) and extra in s0.program.formulas
                    and s0.goal == f.initial[0].goal and same_vector(r.initial[1:], f.initial[1:]))
        yield "weaken_program", run, want

        e = rng.choice(src.ids)

        def run(d=d, e=e):
            return product(d, e)

        def want(r, d=d, e=e):
            return (ok_identity(r) and same_vector(r.initial, tuple(d.initial) + tuple(e.initial))
                    and len(r) == len(instantiate(d)) + len(instantiate(e)))
        yield "product", run, want

    for f, x in opened:
        for t in (Const(a), Const(b), Var(fresh_var(0, x.type, "Z"))):
            def run(f=f, t=t, x=x):
                return specialize(f, t, x)

            def want(r, f=f, t=t, x=x):
                exp = tuple(s.subst(Substitution({x: t})) for s in f.initial)
                return ok_identity(r) and r.is_flat() and same_vector(r.initial, exp)
            yield "specialize", run, want

            th = Substitution({x: t})

            def run(f=f, th=th):
                return specialize_by(f, th)

            def want(r, f=f, th=th):
                exp = tuple(s.subst(th) for s in f.initial)
                return ok_identity(r) and r.is_flat() and same_vector(r.initial, exp)
            yield "specialize_by", run, want

        z = fresh_var(0, x.type, "Y")
        rho = swap_renaming([(x, z)])

        def run(f=f, rho=rho):
            return rename_vars(f, rho)

        def want(r, f=f, rho=rho):
            exp = tuple(s.subst(rho) for s in f.initial)
            return ok_identity(r) and same_vector(r.initial, exp) and len(r) == len(f)
        yield "rename_vars", run, want

    for t_d, c in src.generic_tails():
        s = t_d.initial[0]
        for w in (Const(a), Const(b)):
            def run(t_d=t_d, w=w, c=c):
                return generic_to_instance(t_d, w, c)

            def want(r, s=s, w=w, c=c):
                r0 = r.initial
                return (ok_identity(r) and len(r0) == 1 and r0[0].index == s.index - 1
                        and r0[0].goal == replace_syms(s.goal, {c: w})
                        and r0[0].program == s.program)
            yield "generic_to_instance", run, want

        k0 = fresh_const(0, c.type, "k")
        low = level_reduce(t_d, ConstantReplacer({c: k0}), None, 1)

        def run(low=low, k0=k0):
            return instance_to_generic(low, k0)

        def want(r, low=low, k0=k0):
            (r0,) = r.initial
            (l0,) = low.initial
            new = [e for e in constants(r0.goal) if e.level == 1]
            if k0 not in constants(l0.goal):
                return ok_identity(r) and r0.index == 1 and not new and r0.goal == l0.goal
            return (ok_identity(r) and r0.index == 1 and len(new) == 1
                    and replace_syms(r0.goal, {new[0]: Const(k0)}) == l0.goal)
        yield "instance_to_generic", run, want


def all_cases(n_pairs: int = 200, seed: int = 0):
    src = Source(n_pairs, seed)
    return list(cases(src, random.Random(seed)))


__all__ = ["LEMMAS", "Source", "all_cases", "cases", "ok_identity", "vector_vars"]
