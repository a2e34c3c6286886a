"""Shared fixtures and builders for the test-suite."""

from __future__ import annotations

from uctt.binding import fresh_var
from uctt.elaborate import Program
from uctt.engine.core import DepthExhausted, Derivation, State
from uctt.engine.search import SearchConfig, id_success, solve
from uctt.syntax import parse, parse_goal
from uctt.terms import SIGMA, Var, binder_type, logic_op, open_body, spine

SYM_SRC = """type a, b i.
type q i -> i -> o.
type r i -> o.
q a a. q b a.
pi X\\ pi Y\\ (q X Y => q Y X).
r a. r b.
"""

NTF_SRC = """module ntf.
type p o.
type q o.
type f o -> o.
p :- q.
q :- p.
f p.
"""

EMPTY_SRC = """type p, q o.
type a i.
type q2 i -> i -> o.
"""


class World:
    """A parsed source with helpers for goals and states."""

    def __init__(self, text: str):
        self.src = parse(text)
        self.sig = self.src.signature
        self.program = Program(self.src.clauses)

    def g(self, text: str):
        return parse_goal(text, self.sig)

    def c(self, name: str):
        return self.sig.consts[name]

    def state(self, text: str, i: int = 0) -> State:
        return State(i, self.program, self.g(text))

    def universe(self, lvl: int = 0):
        return self.sig.universe(lvl)

    def cfg(self, system: str = "rest", depth: int = 8, n: int = 1, size: int = 3) -> SearchConfig:
        return SearchConfig(system, depth, size, n, self.universe(lvl=8))


def answers(v, cfg: SearchConfig) -> list:
    """All (answer, derivation) pairs within bounds; exhaustion just ends the list."""
    out = []
    try:
        for pair in solve(v, cfg):
            out.append(pair)
    except DepthExhausted:
        pass
    return out


def id_derivation(v, cfg: SearchConfig) -> Derivation | None:
    o = id_success(v, cfg)
    return o.answers[0][1] if o.answers else None


def open_goal(g):
    """Strip leading existential quantifiers, leaving free level-0 variables."""
    while logic_op(g) is SIGMA:
        q = spine(g)[1][0]
        x = fresh_var(0, binder_type(q), "X")
        g = open_body(q, Var(x))
    return g


def open_variants(g, consts):
    """g with its leading sigmas opened, and once more with each constant of
    consts that occurs in it turned into a fresh level-0 variable."""
    from uctt.terms import constants, replace_syms

    g = open_goal(g)
    out = [g]
    for c in consts:
        if c in constants(g):
            out.append(replace_syms(g, {c: Var(fresh_var(0, c.type, "X"))}))
    return out


def tail(d: Derivation, n: int) -> Derivation:
    """The derivation made of the steps of d after the first n."""
    start = d.vectors[n]
    return Derivation(start, d.steps[n:])
