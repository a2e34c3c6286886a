import pytest

from support import EMPTY_SRC, NTF_SRC, World, id_derivation
from uctt.corpus import generate
from uctt.elaborate import Program, elab
from uctt.engine import Derivation, SearchConfig, State, check_derivation, id_success
from uctt.sequent import (
    NotSingleState, NotUniform, ProofTree, absorb_clause, derivation_to_proof, is_uniform,
    is_valid, leq_t, proof_to_derivation, prove_cut_free, provable, sequent, to_sexpr,
)
from uctt.syntax import parse_clause
from uctt.terms import TRUE

NTF = World(NTF_SRC)
EMPTY = World(EMPTY_SRC)
Q = World("type a, b i. type p o. type q i -> i -> o. q a a. pi x\\ (q x b :- q x a).")

GOLDEN = """(and_R "[0] pi x0\\ q x0 a => q x0 b, q a a |- q a a, (sigma x0\\ q x0 b)"
  (ax "[0] pi x0\\ q x0 a => q x0 b, q a a |- q a a")
  (ex_R "[0] pi x0\\ q x0 a => q x0 b, q a a |- sigma x0\\ q x0 b" :with "a"
    (all_L "[0] pi x0\\ q x0 a => q x0 b, q a a |- q a b" :on "pi x0\\ q x0 a => q x0 b" :with "a"
      (imp_L "[0] pi x0\\ q x0 a => q x0 b, q a a, q a a => q a b |- q a b" :on "q a a => q a b"
        (ax "[0] pi x0\\ q x0 a => q x0 b, q a a, q a a => q a b |- q a a")
        (ax "[0] pi x0\\ q x0 a => q x0 b, q a a, q a a => q a b, q a b |- q a b")))))"""


def seq(w, g, i=0):
    return sequent(w.program.formulas, w.g(g), i)


def test_axiom_leaf():
    t = prove_cut_free(seq(Q, "q a a"), 4)
    assert t.rule == "ax" and not t.premises


def test_ntf():
    t = prove_cut_free(seq(NTF, "f p"), 8)
    assert t.rule == "ax" and is_uniform(t)
    assert provable(seq(NTF, "f q"), 8) == "no"


def test_intuitionistic_law_finitely_fails():
    s = sequent((), EMPTY.g("(p => q) ; (q => p)"))
    for depth in range(1, 11):
        assert provable(s, depth) in ("no", "unknown")
    # the fragment saturates, so the failure is finite rather than a cut
    assert prove_cut_free(s, 10) is None


def test_golden_sexpr():
    t = prove_cut_free(seq(Q, "q a a , sigma y\\ q y b"), 8)
    assert to_sexpr(t) == GOLDEN


def test_is_uniform():
    t = prove_cut_free(seq(Q, "q a a , sigma y\\ q y b"), 8)
    assert is_valid(t) and is_uniform(t)
    # a left rule under a nonatomic consequent
    d = parse_clause("p , q a a", Q.sig)
    s = sequent([d], Q.g("p , q a a"))
    inner = prove_cut_free(sequent([d, Q.g("p"), Q.g("q a a")], Q.g("p , q a a")), 4)
    bad = ProofTree("and_L", s, (inner,), principal=d)
    assert is_valid(bad) and not is_uniform(bad)


def test_derivation_proof_round_trip():
    d = id_derivation(Q.state("q a a"), Q.cfg("resy"))
    assert derivation_to_proof(d).rule == "ax"
    t = prove_cut_free(seq(Q, "q a a , q a b"), 8)
    d = proof_to_derivation(t)
    assert d.steps[0][0].rule == "and" and check_derivation(d).ok
    n = 0
    for pair in generate(150, 41):
        sig, prog, g = pair.load()
        o = id_success(State(0, prog, g), SearchConfig("resy", 8, 3, 1, sig.universe(0)))
        if not o.success:
            continue
        d = o.answers[0][1]
        t = derivation_to_proof(d)
        assert is_valid(t) and is_uniform(t)
        back = proof_to_derivation(t, 0)
        assert check_derivation(back).ok and back.answer.is_identity()
        n += 1
    assert n > 30


def test_translation_errors():
    s1, s2 = Q.state("q a a"), Q.state("q a a")
    with pytest.raises(NotSingleState):
        derivation_to_proof(Derivation((s1, s2)))
    d = parse_clause("p , q a a", Q.sig)
    inner = prove_cut_free(sequent([d, Q.g("p"), Q.g("q a a")], Q.g("p , q a a")), 4)
    bad = ProofTree("and_L", sequent([d], Q.g("p , q a a")), (inner,), principal=d)
    with pytest.raises(NotUniform):
        proof_to_derivation(bad)


def test_leq_t():
    top = sequent(Q.program.formulas, TRUE)
    for g in ("q a a", "q b b", "p"):
        assert leq_t(seq(Q, g), top, 8) == "holds"
    assert leq_t(seq(Q, "q a a , q a b"), seq(Q, "q a a"), 8) == "holds"
    assert leq_t(seq(Q, "q a a"), seq(Q, "q b b"), 8) == "fails"


def test_existence_property():
    t = prove_cut_free(seq(Q, "sigma y\\ q y b"), 8)
    assert t.rule == "ex_R"
    assert provable(seq(Q, "q a b"), 8) == "yes"


def test_absorb_clause():
    d = parse_clause("q a a , (pi x\\ (q x b :- q x a))", Q.sig)
    w = World("type a, b i. type p o. type q i -> i -> o.")
    n = 0
    for k in elab(d):
        goal = w.g("q a a") if not k.binder_types else w.g("q a a => q a b")
        s = sequent([k.term], goal)
        t = prove_cut_free(s, 8)
        if t is None:
            continue
        t2 = absorb_clause(t, k.term, d)
        assert is_valid(t2) and d in t2.conclusion.antecedents
        assert t2.conclusion.consequent == goal
        n += 1
    assert n == 2


def test_cut25_and_contraction_on_corpus():
    n = 0
    for pair in generate(150, 42):
        sig, prog, g = pair.load()
        p = Program(prog.formulas)
        for k in p.elab:
            if k.binder_types or k.is_bare:
                continue
            body, head = k.open([])
            if provable(sequent(p.formulas, body), 8) == "yes":
                assert provable(sequent(p.formulas, head), 10) == "yes"
                n += 1
        # generalised contraction: adding a member of elab changes nothing
        for k in p.elab:
            a = provable(sequent(p.formulas, g), 8)
            b = provable(sequent((*p.formulas, k.term), g), 8)
            if "unknown" not in (a, b):
                assert a == b
    assert n > 5
