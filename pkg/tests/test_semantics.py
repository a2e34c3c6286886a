import random

import pytest

from support import EMPTY_SRC, NTF_SRC, World, answers, open_goal
from uctt.binding import Substitution, compose, fresh_const, fresh_var
from uctt.corpus import generate
from uctt.elaborate import Program
from uctt.engine import DepthExhausted, SearchConfig, State, check_derivation, id_success, solve
from uctt.semantics import (
    BOT, TOP, Bounds, CertificateMismatch, Evaluator, IllegalTheta, extract_derivation,
    ifix_query, is_member, t_eval,
)
from uctt.terms import IOTA, Const, Var, free_vars

QAA = World("type a, b i. type q i -> i -> o. q a a.")
NTF = World(NTF_SRC)
EMPTY = World(EMPTY_SRC)


def test_lattice():
    assert BOT <= TOP and not TOP <= BOT
    assert TOP.join(BOT) is TOP and TOP.meet(BOT) is BOT


def test_t_eval_examples():
    assert t_eval(0, 0, QAA.program, QAA.g("true")) is TOP
    assert t_eval(0, 0, QAA.program, QAA.g("q a a")) is BOT
    assert t_eval(1, 0, QAA.program, QAA.g("q a a")) is TOP
    # oracle: the resolution engine at depth 2
    o = id_success(QAA.state("q a a"), QAA.cfg(depth=2))
    assert o.success
    for k in range(11):
        assert t_eval(k, 0, Program(), EMPTY.g("p")) is BOT


def test_ifix_examples():
    r = ifix_query(0, QAA.program, QAA.g("sigma y\\ q y a"), 8)
    assert (r.status, r.fuel) == ("top", 2)
    assert id_success(QAA.state("sigma y\\ q y a"), QAA.cfg()).success
    assert ifix_query(0, Program(), EMPTY.g("(p => q) ; (q => p)"), 8).status == "bot"
    g = EMPTY.g("(pi x\\ q2 x x) => sigma y\\ pi z\\ q2 y z")
    assert ifix_query(0, Program(), g, 8).status != "top"
    assert ifix_query(0, Program(), g, 8, Bounds(signature=frozenset({EMPTY.c("a")}))).status == "bot"


def test_cycles_saturate():
    assert ifix_query(0, NTF.program, NTF.g("f p"), 8).status == "top"
    assert ifix_query(0, NTF.program, NTF.g("p"), 8).status == "bot"


def test_extract_examples():
    d = extract_derivation(0, 0, QAA.program, QAA.g("true"))
    assert [st.rule for st, _ in d.steps] == ["null"]
    d = extract_derivation(1, 0, QAA.program, QAA.g("q a a"))
    assert [st.rule for st, _ in d.steps] == ["axiom"]
    assert check_derivation(d).ok
    d = extract_derivation(2, 0, NTF.program, NTF.g("f p"))
    assert check_derivation(d).ok and d.initial == (NTF.state("f p"),)
    with pytest.raises(CertificateMismatch):
        extract_derivation(0, 0, QAA.program, QAA.g("q a a"))


def test_is_member_examples():
    assert is_member(Substitution(), 0, QAA.program, QAA.g("q a a"))
    y = fresh_var(0, IOTA, "Y")
    g = QAA.g("q a a").__class__(QAA.g("q a a").head, (Var(y), Const(QAA.c("a"))))
    assert is_member(Substitution({y: Const(QAA.c("a"))}), 0, QAA.program, g)
    assert not is_member(Substitution({y: Const(QAA.c("b"))}), 0, QAA.program, g)
    assert not is_member(Substitution(), 0, QAA.program, g)
    # domain not restricted to the free variables of the pair
    z = fresh_var(0, IOTA, "Z")
    assert is_member(Substitution({y: Const(QAA.c("a")), z: Const(QAA.c("b"))}), 0, QAA.program, g)
    with pytest.raises(IllegalTheta):
        is_member(Substitution({y: Const(fresh_const(1, IOTA))}), 0, QAA.program, g)
    with pytest.raises(IllegalTheta):
        is_member(Substitution({y: Var(z), z: Const(QAA.c("a"))}), 0, QAA.program, g)


def _corpus(n, seed):
    for pair in generate(n, seed):
        yield pair.load()


def test_extraction_and_laws_on_corpus():
    ev = Evaluator(Bounds(signature=frozenset()))
    tops = 0
    for sig, prog, g in _corpus(150, 31):
        r = ev.ifix_query(0, prog, g, 8)
        if r.status == "top":
            tops += 1
            d = extract_derivation(r.fuel, 0, prog, g, evaluator=ev)
            assert check_derivation(d).ok and d.answer.is_identity()
            assert d.initial == (State(0, prog, g),)
    assert tops > 20
    # fuel monotonicity and the and/imp clauses over every memo entry
    for (k, key), v in list(ev.memo.items()):
        nxt = ev.memo.get((k + 1, key))
        if nxt is not None:
            assert v <= nxt
        i, _, g = key
        prog = ev.progs.get(key)
        if prog is None or k == 0:
            continue
        n = ev.node(i, prog, g)
        if n.kind == "and":
            a, b = (ev.t_eval(k - 1, *c) for c in n.children)
            assert v is a.meet(b)
        elif n.kind == "imp":
            assert v is ev.t_eval(k - 1, *n.children[0])


def test_upward_closure():
    rng = random.Random(4)
    w = World("type a, b i. type q i -> i -> o. q a a. q b a. pi X\\ (q X b :- q X a).")
    y = fresh_var(0, IOTA, "Y")
    g = w.g("q a b").__class__(w.g("q a b").head, (Var(y), Const(w.c("b"))))
    cfg = SearchConfig("resy", 8, 3, 1, w.universe(0))
    good = [th for th, _ in answers(State(0, w.program, g), SearchConfig("resy", 8, 3, 5, w.universe(0)))]
    assert good
    for th in good:
        for _ in range(20):
            z = fresh_var(0, IOTA, "Z")
            gamma = Substitution({z: Const(rng.choice([w.c("a"), w.c("b")]))})
            assert is_member(compose(th, gamma), 0, w.program, g, cfg)


def test_member_agrees_with_solve_answers():
    for sig, prog, g in _corpus(80, 32):
        g = open_goal(g)
        xs = sorted(free_vars(g), key=str)
        if not xs:
            continue
        cfg = SearchConfig("resy", 8, 3, 3, sig.universe(0))
        try:
            sols = list(solve(State(0, prog, g), cfg))
        except DepthExhausted:
            continue
        for th, _ in sols:
            closed = Substitution({x: th[x] if x in th.domain else Const(sig.consts["a"]) for x in xs})
            if closed.is_safe() and not any(free_vars(t) for _, t in closed.items()):
                assert is_member(closed, 0, prog, g, cfg)


def test_forall_invariant_under_canonical_constant():
    base = Evaluator(Bounds(canon_tag="k"))
    other = Evaluator(Bounds(canon_tag="m"))
    for sig, prog, g in _corpus(100, 33):
        for k in range(6):
            assert base.t_eval(k, 0, prog, g) is other.t_eval(k, 0, prog, g)
