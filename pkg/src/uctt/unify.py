"""Level-respecting unification for first-order terms and Miller patterns.

A flexible term ``F a1 .. an`` is a pattern when its arguments are
distinct bound variables, or distinct constants and frozen variables whose
level exceeds that of F.  Such arguments are the only names the solution
for F may abstract over; every other symbol of the solution must fit in
F's universe.  A variable of higher level occurring in the solution is
lowered to a fresh one, which is what keeps unifiers legal.

Variables listed as *frozen* behave as rigid constants.  This is how a
derivation is checked for an identity answer: the variables of the
initial vector may not be instantiated.

``unify`` yields at most one substitution, the most general unifier, and
yields nothing when the terms clash.  Problems outside the pattern
fragment raise NonPatternProblem instead of being dropped.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from uctt.binding import Substitution, apply_subst, fresh_var
from uctt.terms import (
    TRUE, A, Abs, App, Arrow, BVar, Const, Sym, Term, TermError, Var, arg_types,
    free_vars, is_flex, normalize, shift, spine,
)


class UnifyError(Exception):
    pass


class NonPatternProblem(UnifyError):
    pass


class LevelViolation(UnifyError):
    pass


class OccursCheck(UnifyError):
    pass


class NotFlex(UnifyError):
    pass


class _Clash(Exception):
    pass


def unify(pairs: Iterable[tuple[Term, Term]], frozen: Iterable[Sym] = ()) -> Iterator[Substitution]:
    u = _Unifier(frozenset(frozen))
    try:
        for s, t in pairs:
            u.add(s, t)
        u.run()
    except _Clash:
        return
    theta = Substitution(u.sigma)
    if theta.illegal_binding() is not None:
        return
    yield theta


def mgu(s: Term, t: Term, frozen: Iterable[Sym] = ()) -> Substitution | None:
    """The most general unifier of two terms, or None when none exists."""
    for theta in unify([(s, t)], frozen):
        return theta
    return None


def unifiable(s: Term, t: Term, frozen: Iterable[Sym] = ()) -> bool:
    try:
        return mgu(s, t, frozen) is not None
    except UnifyError:
        return False


class _Unifier:
    def __init__(self, frozen: frozenset[Sym]):
        self.frozen = frozen
        self.sigma: dict[Sym, Term] = {}
        self.todo: list[tuple[Term, Term, tuple]] = []

    def add(self, s: Term, t: Term, ctx: tuple = ()) -> None:
        self.todo.append((s, t, ctx))

    def apply(self, t: Term) -> Term:
        if not self.sigma or not (free_vars(t) & self.sigma.keys()):
            return t
        return apply_subst(Substitution(self.sigma), t)

    def bind(self, x: Sym, t: Term) -> None:
        one = Substitution({x: t})
        for y in list(self.sigma):
            self.sigma[y] = apply_subst(one, self.sigma[y])
        self.sigma[x] = t

    def run(self) -> None:
        while self.todo:
            s, t, ctx = self.todo.pop()
            self.step(self.apply(s), self.apply(t), ctx)

    def flexible(self, t: Term) -> bool:
        h = spine(t)[0]
        return isinstance(h, Var) and h.sym not in self.frozen

    def step(self, s: Term, t: Term, ctx: tuple) -> None:
        if s == t:
            return
        if isinstance(s, Abs) or isinstance(t, Abs):
            ty = s.ty if isinstance(s, Abs) else t.ty
            self.add(_under(s), _under(t), (*ctx, ty))
            return
        fs, ft = self.flexible(s), self.flexible(t)
        if fs and ft:
            self.flex_flex(s, t, ctx)
        elif fs:
            self.flex_rigid(s, t, ctx)
        elif ft:
            self.flex_rigid(t, s, ctx)
        else:
            hs, as_ = spine(s)
            ht, at = spine(t)
            if hs != ht or len(as_) != len(at):
                raise _Clash()
            for x, y in zip(as_, at):
                self.add(x, y, ctx)

    # pattern arguments --------------------------------------------------

    def pattern_args(self, f: Sym, args: Sequence[Term]) -> list[Term] | None:
        seen = set()
        for a in args:
            a = normalize(a)
            if isinstance(a, BVar):
                pass
            elif isinstance(a, Const) and a.sym.kind != "logic" and a.sym.level > f.level:
                pass
            elif isinstance(a, Var) and a.sym in self.frozen and a.sym.level > f.level:
                pass
            else:
                return None
            if a in seen:
                return None
            seen.add(a)
        return [normalize(a) for a in args]

    # flex-rigid ---------------------------------------------------------

    def flex_rigid(self, s: Term, t: Term, ctx: tuple) -> None:
        h, args = spine(s)
        f = h.sym
        pargs = self.pattern_args(f, args)
        if pargs is None:
            raise NonPatternProblem(f"{s!r} is not a pattern")
        if f in free_vars(t):
            if not args:
                raise OccursCheck(f"{f} occurs in {t!r}")
            # a rigid occurrence can never be pruned away
            if _rigid_occurrence(t, f, self.frozen):
                raise OccursCheck(f"{f} occurs in {t!r}")
            raise NonPatternProblem(f"{f} occurs flexibly in {t!r}")
        body = self.solve_body(f, pargs, t)
        self.bind(f, _lambdas(f.type, len(args), body))

    def solve_body(self, f: Sym, pargs: list[Term], t: Term) -> Term:
        """t with pattern arguments replaced by the bound variables of F's solution.

        The result lives under len(pargs) binders and no context binders.
        """
        n = len(pargs)
        self._flevel = f.level

        def go(u: Term, k: int) -> Term:
            # k counts binders entered inside t
            for pos, a in enumerate(pargs):
                if _matches(u, a, k):
                    return BVar(n - 1 - pos + k)
            if isinstance(u, Abs):
                return Abs(u.ty, go(u.body, k + 1))
            if isinstance(u, BVar):
                if u.index < k:
                    return u
                raise _Clash()  # a context binder not among F's arguments
            if isinstance(u, Const):
                if u.sym.kind != "logic" and u.sym.level > f.level:
                    raise LevelViolation(f"{u.sym} (level {u.sym.level}) cannot be bound to {f} (level {f.level})")
                return u
            if isinstance(u, Var):
                if u.sym in self.frozen:
                    if u.sym.level > f.level:
                        raise LevelViolation(
                            f"{u.sym} (level {u.sym.level}) cannot be bound to {f} (level {f.level})")
                    return u
                if u.sym.level > f.level:
                    low = fresh_var(f.level, u.sym.type, "L")
                    self.bind(u.sym, Var(low))
                    return Var(low)
                return u
            if isinstance(u, App):
                h, args = spine(u)
                if isinstance(h, Var) and h.sym not in self.frozen:
                    return self.prune(h.sym, args, k, go)
                return App(go(h, k), [go(a, k) for a in args])
            raise TermError(f"unexpected term {u!r}")

        return go(t, 0)

    def prune(self, g: Sym, args, k, go):
        """Rebuild G args inside F's solution, dropping arguments F cannot see."""
        keep, out_args = [], []
        for pos, a in enumerate(args):
            try:
                out_args.append(go(a, k))
                keep.append(pos)
            except (_Clash, LevelViolation):
                if not _pattern_arg(normalize(a), self.frozen):
                    raise NonPatternProblem(f"cannot prune argument {a!r} of {g}")
        if len(keep) == len(args) and g.level <= self._flevel:
            return App(Var(g), out_args) if out_args else Var(g)
        tys, res = arg_types(g.type)
        new_ty = res
        for pos in reversed(keep):
            new_ty = Arrow(tys[pos], new_ty)
        h = fresh_var(min(g.level, self._flevel), new_ty, "H")
        sol_body = App(Var(h), [BVar(len(args) - 1 - pos) for pos in keep]) if keep else Var(h)
        self.bind(g, _lambdas(g.type, len(args), sol_body))
        return App(Var(h), out_args) if out_args else Var(h)

    # flex-flex ----------------------------------------------------------

    def flex_flex(self, s: Term, t: Term, ctx: tuple) -> None:
        hf, af = spine(s)
        hg, ag = spine(t)
        f, g = hf.sym, hg.sym
        pf, pg = self.pattern_args(f, af), self.pattern_args(g, ag)
        if pf is None or pg is None:
            raise NonPatternProblem(f"{s!r} = {t!r} is outside the pattern fragment")
        if not af and not ag:
            # bind the variable of higher level
            if f.level >= g.level:
                self.bind(f, Var(g))
            else:
                self.bind(g, Var(f))
            return
        if f == g:
            keep = [k for k in range(len(pf)) if pf[k] == pg[k]]
            tys, res = arg_types(f.type)
            ty = res
            for k in reversed(keep):
                ty = Arrow(tys[k], ty)
            h = fresh_var(f.level, ty, "H")
            body = App(Var(h), [BVar(len(pf) - 1 - k) for k in keep]) if keep else Var(h)
            self.bind(f, _lambdas(f.type, len(pf), body))
            return
        common = [a for a in pf if a in pg]
        lvl = min(f.level, g.level)
        tys_f, res = arg_types(f.type)
        ty = res
        for a in reversed(common):
            ty = Arrow(tys_f[pf.index(a)], ty)
        h = fresh_var(lvl, ty, "H")
        for v, pv in ((f, pf), (g, pg)):
            body = App(Var(h), [BVar(len(pv) - 1 - pv.index(a)) for a in common]) if common else Var(h)
            self.bind(v, _lambdas(v.type, len(pv), body))


def _pattern_arg(a: Term, frozen) -> bool:
    return isinstance(a, (BVar, Const)) or (isinstance(a, Var) and a.sym in frozen)


def _matches(u: Term, a: Term, k: int) -> bool:
    if isinstance(a, BVar):
        return isinstance(u, BVar) and u.index == a.index + k
    return u == a


def _under(t: Term) -> Term:
    if isinstance(t, Abs):
        return t.body
    return normalize(App(shift(t, 1), (BVar(0),)))


def _lambdas(ty, n: int, body: Term) -> Term:
    tys, _ = arg_types(ty)
    out = body
    for k in reversed(range(n)):
        out = Abs(tys[k], out)
    return normalize(out)


def _rigid_occurrence(t: Term, f: Sym, frozen) -> bool:
    if isinstance(t, Var):
        return t.sym == f
    if isinstance(t, Abs):
        return _rigid_occurrence(t.body, f, frozen)
    if isinstance(t, App):
        h, args = spine(t)
        if isinstance(h, Var) and h.sym not in frozen:
            return h.sym == f
        return any(_rigid_occurrence(a, f, frozen) for a in args)
    return False


def solve_flex_top(atom: Term) -> Substitution:
    """{lambda u1..um. true / X} for a flexible atom X t1 .. tm."""
    if not is_flex(atom):
        raise NotFlex(f"{atom!r} is not a flexible atom")
    h, args = spine(atom)
    tys, res = arg_types(h.sym.type)
    if res != A or len(tys) != len(args):
        raise NotFlex(f"{atom!r} is not a fully applied atom variable")
    return Substitution({h.sym: _lambdas(h.sym.type, len(args), TRUE)})


solveFlexTop = solve_flex_top


__all__ = [
    "unify", "mgu", "unifiable", "solve_flex_top", "UnifyError", "NonPatternProblem",
    "LevelViolation", "OccursCheck", "NotFlex",
]
