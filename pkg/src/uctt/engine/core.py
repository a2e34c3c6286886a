"""States, steps, derivations and the single-step rule application."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from uctt.binding import (
    ID, Substitution, apply_subst, binding_ok, compose_all, fresh_const, fresh_var,
)
from uctt.elaborate import Clause, Program
from uctt.terms import (
    AND, IMP, OR, PI, SIGMA, TRUE, G, Const, Sym, Term, Var, binder_type, constants,
    free_vars, has_type, is_flex, is_positive, is_rigid, level, logic_op, open_body, spine,
)


class EngineError(Exception):
    pass


class RuleShapeMismatch(EngineError):
    pass


class LevelViolation(EngineError):
    pass


class NoUnifier(EngineError):
    pass


class IllegalSubstitution(EngineError):
    pass


class DepthExhausted(EngineError):
    pass


class HypothesisUnmet(EngineError):
    pass


RULES = ("null", "true", "backchain", "axiom", "or", "and", "instance", "exists",
         "augment", "generic", "sub")


@dataclass(frozen=True)
class State:
    index: int
    program: Program
    goal: Term

    def subst(self, theta: Substitution) -> "State":
        if not len(theta):
            return self
        return State(self.index, self.program.subst(theta), apply_subst(theta, self.goal))

    @property
    def free_vars(self) -> frozenset[Sym]:
        return self.program.free_vars | free_vars(self.goal)

    @property
    def constants(self) -> frozenset[Sym]:
        return self.program.constants | constants(self.goal)

    @property
    def level(self) -> int:
        return max(self.program.level, level(self.goal))

    def __repr__(self) -> str:
        return f"<{self.index}, {self.program!r} ?- {self.goal!r}>"


Vector = tuple  # tuple[State, ...]; the empty tuple is the null vector


def vector_subst(v: Sequence[State], theta: Substitution) -> Vector:
    return tuple(s.subst(theta) for s in v)


def vector_vars(v: Iterable[State]) -> frozenset[Sym]:
    return frozenset().union(*(s.free_vars for s in v))


def vector_consts(v: Iterable[State]) -> frozenset[Sym]:
    return frozenset().union(*(s.constants for s in v))


def state(index: int, program: Program | Iterable[Term], goal: Term) -> State:
    if not isinstance(program, Program):
        program = Program(program)
    return State(index, program, goal)


@dataclass(frozen=True)
class Step:
    """One resolution step.

    ``delta`` lists the fresh symbols a step introduces: the renaming-apart
    variables of backchain and axiom in binder order, or the variable of an
    exists step.  ``witness`` is the instance term, ``const`` the generic
    constant and ``side`` the chosen disjunct.
    """

    rule: str
    pos: int
    subst: Substitution = ID
    clause: Clause | None = None
    delta: tuple = ()
    witness: Term | None = None
    const: Sym | None = None
    side: int | None = None

    def fresh_symbols(self) -> tuple:
        out = tuple(self.delta)
        if self.const is not None:
            out += (self.const,)
        return out


@dataclass(frozen=True)
class Derivation:
    initial: Vector
    steps: tuple = ()  # tuple[(Step, Vector), ...]

    @property
    def last(self) -> Vector:
        return self.steps[-1][1] if self.steps else self.initial

    @property
    def vectors(self) -> list:
        return [self.initial] + [v for _, v in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def successful(self) -> bool:
        return self.last == ()

    @property
    def composed(self) -> Substitution:
        return compose_all(s.subst for s, _ in self.steps)

    @property
    def answer(self) -> Substitution:
        return self.composed.restrict(vector_vars(self.initial))

    def extend(self, step: Step, v: Vector) -> "Derivation":
        return Derivation(self.initial, self.steps + ((step, v),))

    def then(self, other: "Derivation") -> "Derivation":
        if other.initial != self.last:
            raise EngineError("derivations do not meet")
        return Derivation(self.initial, self.steps + other.steps)

    def is_flat(self) -> bool:
        for st, _ in self.steps:
            if st.rule == "true":
                return False
            if st.rule in ("backchain", "axiom"):
                if not st.subst.is_safe() or not st.subst.domain <= set(st.delta):
                    return False
            if st.rule == "sub":
                return False
        return True

    def fresh_symbols(self) -> list:
        return [x for st, _ in self.steps for x in st.fresh_symbols()]

    def symbols(self) -> frozenset[Sym]:
        out = set()
        for v in self.vectors:
            out |= vector_vars(v) | vector_consts(v)
        for st, _ in self.steps:
            out |= set(st.fresh_symbols())
            out |= st.subst.domain | st.subst.range_vars | st.subst.range_consts
            if st.witness is not None:
                out |= free_vars(st.witness) | constants(st.witness)
        return frozenset(out)


def initial(v: Vector | State) -> Derivation:
    return Derivation((v,) if isinstance(v, State) else tuple(v))


# ---------------------------------------------------------------------------
# rule application


def _shape(goal: Term) -> str:
    if goal == TRUE:
        return "top"
    op = logic_op(goal)
    if op is AND:
        return "and"
    if op is OR:
        return "or"
    if op is IMP:
        return "imp"
    if op is SIGMA:
        return "exists"
    if op is PI:
        return "forall"
    if is_rigid(goal):
        return "rigid"
    if is_flex(goal):
        return "flex"
    return "other"


def _witness_ok(t: Term, ty) -> bool:
    return binding_ok(Sym("_", ty, 0, "var"), t) and is_positive(t)


def check_legal(theta: Substitution) -> None:
    bad = theta.illegal_binding()
    if bad is None:
        return
    x, t, why = bad
    if why == "level":
        raise LevelViolation(f"{t!r} has level {level(t)} > level {x.level} of {x}")
    raise IllegalSubstitution(f"{t!r}/{x} violates {why}")


def check_state_levels(s: State) -> None:
    if s.level > s.index:
        raise LevelViolation(f"state of index {s.index} mentions level {s.level}")


def apply_rule(v: Vector, step: Step) -> Vector:
    """Successor of v under a fully specified step, checking every side condition
    that does not depend on the derivation history."""
    pos = step.pos
    if not 0 <= pos < len(v):
        raise RuleShapeMismatch(f"no state at position {pos}")
    s = v[pos]
    before, after = v[:pos], v[pos + 1:]
    shape = _shape(s.goal)
    rule = step.rule
    theta = step.subst
    i, prog, goal = s.index, s.program, s.goal

    def expect(*shapes):
        if shape not in shapes:
            raise RuleShapeMismatch(f"{rule} does not apply to {goal!r}")

    def nosub():
        if len(theta):
            raise RuleShapeMismatch(f"{rule} carries the identity substitution")

    if rule == "null":
        expect("top")
        nosub()
        return before + after
    if rule == "true":
        expect("flex", "rigid")
        if is_rigid(goal):
            raise RuleShapeMismatch("true applies to atoms whose instance is true")
        if not len(theta):
            raise RuleShapeMismatch("true needs a non-identity substitution")
        check_legal(theta)
        if apply_subst(theta, goal) != TRUE:
            raise NoUnifier(f"{theta!r} does not turn {goal!r} into true")
        new = State(i, prog.subst(theta), TRUE)
        return vector_subst(before, theta) + (new,) + vector_subst(after, theta)
    if rule in ("backchain", "axiom"):
        expect("rigid")
        k = step.clause
        if k is None:
            raise RuleShapeMismatch(f"{rule} needs a clause")
        if k not in prog.elab:
            raise RuleShapeMismatch(f"{k!r} is not in elab of the program")
        has_body = _has_body(k)
        if (rule == "axiom") == has_body:
            raise RuleShapeMismatch(f"{rule} does not fit clause {k!r}")
        ws = step.delta
        tys = k.binder_types
        if len(ws) != len(tys) or any(w.type != ty or w.kind != "var" for w, ty in zip(ws, tys)):
            raise RuleShapeMismatch("renaming-apart variables do not fit the clause binders")
        if len(set(ws)) != len(ws):
            raise RuleShapeMismatch("renaming-apart variables are not distinct")
        for w in ws:
            if w.level > i:
                raise LevelViolation(f"renaming variable {w} has level {w.level} > {i}")
        body, head = k.open([Var(w) for w in ws])
        check_legal(theta)
        if apply_subst(theta, goal) != apply_subst(theta, head):
            raise NoUnifier(f"{theta!r} does not unify {goal!r} with {head!r}")
        rest_b, rest_a = vector_subst(before, theta), vector_subst(after, theta)
        if rule == "axiom":
            return rest_b + rest_a
        new = State(i, prog.subst(theta), apply_subst(theta, body))
        return rest_b + (new,) + rest_a
    nosub_rules = ("or", "and", "instance", "exists", "augment", "generic")
    if rule in nosub_rules:
        nosub()
    if rule == "or":
        expect("or")
        if step.side not in (0, 1):
            raise RuleShapeMismatch("or needs side 0 or 1")
        return before + (State(i, prog, spine(goal)[1][step.side]),) + after
    if rule == "and":
        expect("and")
        g1, g2 = spine(goal)[1]
        return before + (State(i, prog, g1), State(i, prog, g2)) + after
    if rule == "augment":
        expect("imp")
        d, g = spine(goal)[1]
        return before + (State(i, prog.augment(d), g),) + after
    if rule in ("instance", "exists"):
        expect("exists")
        q = spine(goal)[1][0]
        ty = binder_type(q)
        t = step.witness
        if t is None:
            raise RuleShapeMismatch(f"{rule} needs a witness")
        if rule == "exists":
            if not (isinstance(t, Var) and step.delta == (t.sym,)):
                raise RuleShapeMismatch("exists instantiates with its fresh variable")
            if t.sym.type != ty:
                raise RuleShapeMismatch(f"variable {t.sym} is not of type {ty}")
        elif not _witness_ok(t, ty):
            raise IllegalSubstitution(f"{t!r} is not a positive term of type {ty}")
        if level(t) > i:
            raise LevelViolation(f"witness {t!r} has level {level(t)} > {i}")
        return before + (State(i, prog, open_body(q, t)),) + after
    if rule == "generic":
        expect("forall")
        c = step.const
        q = spine(goal)[1][0]
        if c is None or c.kind != "const" or c.type != binder_type(q):
            raise RuleShapeMismatch("generic needs a constant of the binder type")
        if c.level != i + 1:
            raise LevelViolation(f"generic constant {c} has level {c.level}, expected {i + 1}")
        return before + (State(i + 1, prog, open_body(q, Const(c))),) + after
    if rule == "sub":
        check_legal(theta)
        return vector_subst(v, theta)
    raise RuleShapeMismatch(f"unknown rule {rule}")


applyRule = apply_rule


def _has_body(k: Clause) -> bool:
    t = k.term
    while logic_op(t) is PI:
        q = spine(t)[1][0]
        t = open_body(q, Var(Sym("_", binder_type(q), 0, "var")))
    return logic_op(t) is IMP


def step_with(d: Derivation, step: Step) -> Derivation:
    return d.extend(step, apply_rule(d.last, step))


def goal_state(index: int, prog, goal: Term) -> State:
    if not has_type(goal, G):
        raise RuleShapeMismatch(f"{goal!r} is not a goal")
    return state(index, prog, goal)


# convenience constructors used by plans and lemma transformations


def fresh_delta(k: Clause, lvl: int) -> tuple:
    return tuple(fresh_var(lvl, ty, "W") for ty in k.binder_types)


def fresh_generic(goal: Term, index: int) -> Sym:
    q = spine(goal)[1][0]
    return fresh_const(index + 1, binder_type(q), "c")


__all__ = [
    "State", "Vector", "Step", "Derivation", "apply_rule", "applyRule", "step_with",
    "vector_subst", "vector_vars", "vector_consts", "state", "goal_state", "initial",
    "EngineError", "RuleShapeMismatch", "LevelViolation", "NoUnifier",
    "IllegalSubstitution", "DepthExhausted", "HypothesisUnmet", "RULES",
    "fresh_delta", "fresh_generic", "check_legal", "check_state_levels",
]
