import itertools
import random

import pytest

from oracles import robinson
from uctt.binding import apply_subst
from uctt.terms import (
    IOTA, TRUE, A, Abs, App, BVar, Const, R, Sym, Var, arrow, level, normalize,
)
from uctt.unify import LevelViolation, NotFlex, UnifyError, mgu, solve_flex_top, unify

a = Sym("a", IOTA)
b = Sym("b", IOTA)
c1 = Sym("c1", IOTA, 1)
f = Sym("f", arrow(IOTA, IOTA, IOTA))
g = Sym("g", arrow(IOTA, IOTA))
q = Sym("q", arrow(IOTA, IOTA, R))
Y0 = Sym("Y0", IOTA, 0, "var")
FUNS = {"f": f, "g": g, "a": a, "b": b}
VARS = {n: Sym(n, IOTA, 0, "var") for n in "XYZW"}


def qq(s, t):
    return App(Const(q), (s, t))


def test_first_order_mgu():
    th = mgu(qq(Var(Y0), Const(a)), qq(Const(a), Const(a)))
    assert th is not None and th[Y0] == Const(a)


def test_level_discipline():
    t = qq(Var(Y0), Const(c1))
    th = mgu(t, t)
    assert th is not None and th.is_identity()
    with pytest.raises(LevelViolation):
        mgu(qq(Var(Y0), Var(Y0)), qq(Var(Y0), Const(c1)))


def test_pattern_unification_against_brute_force():
    F = Sym("F", arrow(IOTA, R), 0, "var")
    lhs, rhs = App(Var(F), (Const(c1),)), qq(Const(c1), Const(c1))
    th = mgu(lhs, rhs)
    # brute force: every lambda x. q s t over {x, a, b} that F may take (level 0)
    cands = []
    for s, t in itertools.product([BVar(0), Const(a), Const(b)], repeat=2):
        lam = Abs(IOTA, qq(s, t))
        if level(lam) <= F.level and normalize(App(lam, (Const(c1),))) == rhs:
            cands.append(normalize(lam))
    assert cands == [Abs(IOTA, qq(BVar(0), BVar(0)))]
    assert th[F] == cands[0]
    assert apply_subst(th, lhs) == apply_subst(th, rhs)


def test_solve_flex_top():
    X = Sym("XA", A, 0, "var")
    assert solve_flex_top(Var(X))[X] == TRUE
    G2 = Sym("G2", arrow(IOTA, IOTA, A), 0, "var")
    th = solve_flex_top(App(Var(G2), (Const(a), Const(b))))
    assert th[G2] == Abs(IOTA, Abs(IOTA, TRUE))
    assert apply_subst(th, App(Var(G2), (Const(a), Const(b)))) == TRUE
    with pytest.raises(NotFlex):
        solve_flex_top(qq(Const(a), Const(a)))


# textbook comparison on random first-order pairs


def rand_fo(rng, depth):
    if depth == 0 or rng.random() < 0.35:
        return rng.choice(["X", "Y", "Z", "W", ("a",), ("b",)])
    if rng.random() < 0.5:
        return ("g", rand_fo(rng, depth - 1))
    return ("f", rand_fo(rng, depth - 1), rand_fo(rng, depth - 1))


def to_term(t):
    if isinstance(t, str):
        return Var(VARS[t])
    if len(t) == 1:
        return Const(FUNS[t[0]])
    return App(Const(FUNS[t[0]]), tuple(to_term(x) for x in t[1:]))


def from_term(t):
    if isinstance(t, Var):
        return t.sym.name
    if isinstance(t, Const):
        return (t.sym.name,)
    return (t.head.sym.name, *(from_term(x) for x in t.args))


def test_unify_agrees_with_robinson():
    rng = random.Random(17)
    succ = fail = 0
    for _ in range(1000):
        s, t = rand_fo(rng, 3), rand_fo(rng, 3)
        oracle = robinson.unify(s, t)
        try:
            th = mgu(to_term(s), to_term(t))
        except UnifyError:
            th = None
        assert (th is None) == (oracle is None), (s, t)
        if th is None:
            fail += 1
            continue
        succ += 1
        assert th.is_safe() and th.is_legal()
        got = apply_subst(th, to_term(s))
        assert got == apply_subst(th, to_term(t))
        # most general: same unified term up to renaming
        assert robinson.variant(from_term(got), robinson.resolve(s, oracle))
    assert succ > 200 and fail > 200


def test_unifiers_are_safe_and_legal():
    rng = random.Random(2)
    for _ in range(300):
        s, t = to_term(rand_fo(rng, 3)), to_term(rand_fo(rng, 3))
        try:
            for th in unify([(s, t)]):
                assert th.is_safe() and th.is_legal()
                assert apply_subst(th, s) == apply_subst(th, t)
        except UnifyError:
            pass
