from collections import Counter

import pytest

from lemma_cases import LEMMAS, all_cases
from support import SYM_SRC, World, id_derivation
from uctt.binding import ConstantReplacer, fresh_const, fresh_var
from uctt.engine import (
    HypothesisUnmet, generic_to_instance, instance_to_generic, instantiate, level_increase,
    level_reduce, replace_const_by_var, specialize, weaken_program,
)
from uctt.engine.lemmas import TRANSFORMATIONS
from uctt.terms import IOTA, Const

SYM = World(SYM_SRC)
CASES = all_cases(300, seed=3)


def test_every_lemma_is_exercised():
    assert set(LEMMAS) == set(TRANSFORMATIONS)
    cnt = Counter(name for name, _, _ in CASES)
    assert set(cnt) == set(LEMMAS), set(LEMMAS) - set(cnt)


@pytest.mark.parametrize("lemma", LEMMAS)
def test_lemma_outputs(lemma):
    n = 0
    for name, run, want in CASES:
        if name == lemma:
            assert want(run())
            n += 1
    assert n > 0


def test_expectations_are_not_vacuous():
    # feeding the wrong derivation to an expectation makes it fail
    by_name = {}
    for name, run, want in CASES:
        by_name.setdefault(name, []).append((run, want))
    run, want = by_name["level_increase"][0]
    assert not want(level_reduce(run()))


def test_hypotheses_are_checked():
    d = id_derivation(SYM.state("q a a"), SYM.cfg("resy"))
    f = instantiate(d)
    with pytest.raises(HypothesisUnmet):
        level_reduce(f)  # index 0
    with pytest.raises(HypothesisUnmet):
        replace_const_by_var(f, SYM.c("a"), fresh_var(0, IOTA.__class__("o"), "Y"))
    with pytest.raises(HypothesisUnmet):
        weaken_program(f, [])
    with pytest.raises(HypothesisUnmet):
        generic_to_instance(f, Const(SYM.c("a")))
    with pytest.raises(HypothesisUnmet):
        instance_to_generic(f, SYM.c("a"))  # a occurs in the program
    c2 = fresh_const(2, IOTA)
    with pytest.raises(HypothesisUnmet):
        level_increase(f, ConstantReplacer({SYM.c("a"): c2, c2: SYM.c("a")}))


def test_specialize_rejects_high_level_witness():
    d = id_derivation(SYM.state("q a a => q a a"), SYM.cfg("resy"))
    x = fresh_var(0, IOTA, "X")
    f = replace_const_by_var(instantiate(d), SYM.c("a"), x)
    with pytest.raises(HypothesisUnmet):
        specialize(f, Const(fresh_const(1, IOTA)), x)
