"""Derivation plans.

A plan is a tree of rule choices for one state, free of fresh names.
``realize`` turns it into a flat derivation, inventing fresh
renaming-apart variables and generic constants as it goes.  The data a
node carries depends on the rule:

    or          (side,)
    instance    (t,)
    generic     (c,)   the constant the child plan uses for the new name
    backchain   (clause, (t1, .., tn))   binder instances
    axiom       (clause, (t1, .., tn))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from uctt.binding import Substitution, fresh_const
from uctt.elaborate import Clause
from uctt.engine.core import Derivation, RuleShapeMismatch, State, Step, Vector, fresh_delta, step_with
from uctt.terms import Const, Term, Var, replace_syms


@dataclass(frozen=True)
class Plan:
    rule: str
    data: tuple = ()
    children: tuple = ()

    def map_terms(self, f: Callable[[Term], Term]) -> "Plan":
        if self.rule in ("backchain", "axiom"):
            k, ts = self.data
            data = (Clause(f(k.term), k.path), tuple(f(t) for t in ts))
        elif self.rule == "instance":
            data = (f(self.data[0]),)
        else:
            data = self.data
        return Plan(self.rule, data, tuple(c.map_terms(f) for c in self.children))

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def _rename_const(p: Plan, old, new) -> Plan:
    sub = {old: Const(new)}
    out = p.map_terms(lambda t: replace_syms(t, sub))
    return _rename_generic_data(out, old, new)


def _rename_generic_data(p: Plan, old, new) -> Plan:
    data = p.data
    if p.rule == "generic" and data and data[0] == old:
        data = (new,)
    return Plan(p.rule, data, tuple(_rename_generic_data(c, old, new) for c in p.children))


def realize(v: Vector | State, plan: Plan, pos: int = 0) -> Derivation:
    """The derivation that runs ``plan`` on the state at ``pos``."""
    d = Derivation((v,) if isinstance(v, State) else tuple(v))
    return _run(d, pos, plan)


def _run(d: Derivation, pos: int, p: Plan) -> Derivation:
    r = p.rule
    if r == "null":
        return step_with(d, Step("null", pos))
    if r == "and":
        d = step_with(d, Step("and", pos))
        d = _run(d, pos, p.children[0])
        return _run(d, pos, p.children[1])
    if r == "or":
        return _run(step_with(d, Step("or", pos, side=p.data[0])), pos, p.children[0])
    if r == "augment":
        return _run(step_with(d, Step("augment", pos)), pos, p.children[0])
    if r == "instance":
        return _run(step_with(d, Step("instance", pos, witness=p.data[0])), pos, p.children[0])
    if r == "generic":
        s = d.last[pos]
        old = p.data[0]
        c = fresh_const(s.index + 1, old.type, "c")
        child = _rename_const(p.children[0], old, c)
        return _run(step_with(d, Step("generic", pos, const=c)), pos, child)
    if r in ("backchain", "axiom"):
        k, ts = p.data
        s = d.last[pos]
        ws = fresh_delta(k, s.index)
        theta = Substitution({w: t for w, t in zip(ws, ts) if Var(w) != t})
        d = step_with(d, Step(r, pos, theta, clause=k, delta=ws))
        if r == "axiom":
            return d
        return _run(d, pos, p.children[0])
    raise RuleShapeMismatch(f"plan rule {r} cannot be realized")


__all__ = ["Plan", "realize"]
