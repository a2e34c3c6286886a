import random

import pytest

from oracles.naive_lambda import reduce as naive_reduce
from uctt.terms import (
    AND, IMP, IOTA, OR, A, Abs, App, Arrow, BVar, Const, FormulaClass, G, H, NotASubtype, O, P,
    R, Sym, TypeMismatch, Var, arrow, check, classify, coerce, level, normalize, subtype,
)

a = Sym("a", IOTA)
b = Sym("b", IOTA)
c1 = Sym("c1", IOTA, 1)
f = Sym("f", arrow(IOTA, IOTA))
g2 = Sym("g", arrow(IOTA, IOTA, IOTA))
h = Sym("h", arrow(arrow(IOTA, IOTA), IOTA))
q = Sym("q", arrow(IOTA, IOTA, R))
r = Sym("r", arrow(IOTA, R))
p = Sym("p", R)
pp = Sym("pp", R)
X = Sym("X", IOTA, 0, "var")
F = Sym("F", arrow(IOTA, IOTA), 0, "var")
XO = Sym("XO", A, 0, "var")

C = Const


def test_subtype_order():
    assert subtype(R, A) and subtype(A, H) and subtype(A, G) and subtype(A, P) and subtype(H, G)
    assert subtype(R, G)
    assert not subtype(G, P) and not subtype(P, G) and not subtype(H, A)
    for t in (R, A, H, G, P, O):
        assert subtype(t, t)


def test_arrow_right_associative():
    assert arrow(IOTA, IOTA, O) == Arrow(IOTA, Arrow(IOTA, O))


def test_single_beta_step():
    t = App(Abs(IOTA, App(C(q), (BVar(0), BVar(0)))), (C(a),))
    assert normalize(t) == App(C(q), (C(a), C(a)))


def test_eta_contraction():
    t = Abs(IOTA, App(C(f), (BVar(0),)))
    assert normalize(t) == C(f)


def test_beta_on_connective():
    # (lambda X. X & X) p
    t = App(Abs(R, App(C(AND), (BVar(0), BVar(0)))), (C(p),))
    want = App(C(AND), (C(p), C(p)))
    assert naive_reduce(t) == want
    assert normalize(t) == want


def test_no_eta_when_bound_var_used_elsewhere():
    t = Abs(IOTA, App(C(q), (BVar(0), BVar(0))))
    assert normalize(t) == t


def test_normalize_preserves_level():
    t = App(Abs(IOTA, App(C(q), (BVar(0), C(a)))), (C(c1),))
    assert level(normalize(t)) == 1
    k = App(Abs(IOTA, C(p)), (C(c1),))
    assert level(normalize(k)) == 0


def test_ill_typed_application():
    with pytest.raises(TypeMismatch):
        check(App(C(f), (C(p),)))


def test_classify_examples():
    assert FormulaClass.RIGID_ATOM in classify(App(C(q), (C(a), C(a))))
    assert FormulaClass.FLEX_ATOM in classify(App(Var(Sym("Q", arrow(IOTA, A), 0, "var")), (C(a),)))
    g = App(C(OR), (App(C(IMP), (C(p), C(pp))), C(Sym("rr", R))))
    k = classify(g)
    assert FormulaClass.GOAL in k and FormulaClass.PROGRAM not in k


def test_classify_program_heads_are_rigid():
    d = App(C(IMP), (C(p), App(C(r), (C(a),))))
    assert FormulaClass.PROGRAM in classify(d)
    flex_head = App(C(IMP), (C(p), Var(XO)))
    assert FormulaClass.PROGRAM not in classify(flex_head)


def test_coerce():
    t = App(C(q), (C(a), C(a)))
    assert coerce(t, A) is t
    assert coerce(t, G) is t
    with pytest.raises(NotASubtype):
        coerce(App(C(OR), (C(p), C(pp))), P)


# random well-typed raw terms, compared with the named-variable oracle

BASE_TYPES = [IOTA, arrow(IOTA, IOTA)]
HEADS = [C(a), C(b), C(f), C(g2), C(h), Var(X), Var(F)]


def _heads_for(ty, ctx):
    out = []
    for hd in HEADS:
        t = hd.sym.type
        args = []
        while True:
            if t == ty:
                out.append((hd, args))
                break
            if not isinstance(t, Arrow):
                break
            args = [*args, t.dom]
            t = t.cod
    for k, cty in enumerate(reversed(ctx)):
        t, args = cty, []
        while True:
            if t == ty:
                out.append((BVar(k), args))
                break
            if not isinstance(t, Arrow):
                break
            args = [*args, t.dom]
            t = t.cod
    return out


def gen(rng, ty, budget, ctx=()):
    """A raw term of type ty with about budget symbols, possibly with redexes."""
    choice = rng.random()
    if budget > 3 and choice < 0.3:
        sigma = rng.choice(BASE_TYPES)
        body = gen(rng, ty, budget // 2, (*ctx, sigma))
        return App(Abs(sigma, body), (gen(rng, sigma, budget // 2, ctx),))
    if isinstance(ty, Arrow) and (choice < 0.6 or budget <= 1):
        return Abs(ty.dom, gen(rng, ty.cod, budget - 1, (*ctx, ty.dom)))
    heads = _heads_for(ty, ctx)
    if budget <= 1:
        heads = [x for x in heads if not x[1]] or heads
    hd, args = rng.choice(heads)
    if not args:
        return hd
    share = max(1, (budget - 1) // len(args))
    return App(hd, tuple(gen(rng, t, share, ctx) for t in args))


def raw_size(t):
    if isinstance(t, App):
        return raw_size(t.head) + sum(raw_size(x) for x in t.args)
    if isinstance(t, Abs):
        return 1 + raw_size(t.body)
    return 1


def random_terms(n, seed=0, max_size=12):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        ty = rng.choice([IOTA, arrow(IOTA, IOTA), arrow(arrow(IOTA, IOTA), IOTA)])
        t = gen(rng, ty, rng.randint(1, 8))
        if raw_size(t) <= max_size:
            out.append((t, ty))
    return out


def test_normalize_matches_naive_reducer():
    terms = random_terms(1000, seed=11)
    redexes = sum(1 for t, _ in terms if normalize(t) != t)
    assert redexes > 200  # the sample really exercises reduction
    for t, _ in terms:
        assert normalize(t) == naive_reduce(t), t


def test_normalize_idempotent_and_typed():
    for t, ty in random_terms(300, seed=5):
        n = normalize(t)
        assert normalize(n) == n
        assert check(n) == ty
        assert level(n) <= level(t)
