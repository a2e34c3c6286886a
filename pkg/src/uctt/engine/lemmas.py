"""Executable derivation transformations.

Each function takes derivations and returns a new derivation built step by
step with ``apply_rule``, so every output is a derivation by construction;
the caller can still re-check it with ``check_derivation``.  Hypotheses
that the construction relies on are checked up front and reported as
HypothesisUnmet.

Most transformations work on flat derivations with identity answer.  In
such a derivation no substitution touches a variable of the vector it is
applied to, so the derivation can be *transported*: every vector is
mapped through a fixed symbol map, the state indices are shifted, and
each step introduces fresh symbols of its own.  ``_Transport`` does this
for specialization, constant replacement, and level reduction and
increase.  Renamings work on any derivation.
"""

from __future__ import annotations

from typing import Callable, Iterable

from uctt.binding import (
    ID, ConstantReplacer, NotARenaming, Substitution, apply_replacer, apply_subst, binding_ok,
    check_renaming, compose, fresh_const, fresh_var, rename_subst, replace_in_subst,
    swap_renaming,
)
from uctt.elaborate import Clause, Program
from uctt.engine.core import (
    Derivation, HypothesisUnmet, State, Step, apply_rule, vector_consts, vector_vars,
)
from uctt.terms import Const, Sym, Term, Var, constants, free_vars, is_positive, level, replace_syms


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise HypothesisUnmet(what)


def _successful_id(d: Derivation) -> None:
    _require(d.successful, "derivation is not successful")
    _require(d.answer.is_identity(), "computed answer is not the identity")


def _flat_id(d: Derivation) -> None:
    _successful_id(d)
    _require(d.is_flat(), "derivation is not flat")


def introduced_vars(d: Derivation) -> frozenset[Sym]:
    return frozenset(s for s in d.symbols() if s.kind == "var") - vector_vars(d.initial)


def introduced_consts(d: Derivation) -> frozenset[Sym]:
    return frozenset(st.const for st, _ in d.steps if st.const is not None)


# ---------------------------------------------------------------------------
# renamings, valid for any derivation


def _map_step(st: Step, term: Callable[[Term], Term], subst: Callable[[Substitution], Substitution],
              sym: Callable[[Sym], Sym]) -> Step:
    return Step(
        st.rule, st.pos, subst(st.subst),
        None if st.clause is None else Clause(term(st.clause.term), st.clause.path),
        tuple(sym(w) for w in st.delta),
        None if st.witness is None else term(st.witness),
        None if st.const is None else sym(st.const),
        st.side,
    )


def _replay(initial: tuple, steps: Iterable[Step]) -> Derivation:
    d = Derivation(tuple(initial))
    v = d.initial
    for st in steps:
        v = apply_rule(v, st)
        d = d.extend(st, v)
    return d


def rename_vars(d: Derivation, rho: Substitution) -> Derivation:
    """d with every vector and substitution renamed by the neutral renaming rho."""
    try:
        check_renaming(rho)
    except NotARenaming as e:
        raise HypothesisUnmet(f"not a neutral renaming: {e}") from None

    def term(t):
        return apply_subst(rho, t)

    def sym(x):
        return rho[x].sym if x in rho else x

    init = tuple(State(s.index, s.program.map(term), term(s.goal)) for s in d.initial)
    return _replay(init, (_map_step(st, term, lambda th: rename_subst(rho, th), sym)
                          for st, _ in d.steps))


renameVars = rename_vars


def rename_consts(d: Derivation, xi: ConstantReplacer) -> Derivation:
    """d with xi applied to every vector and substitution."""
    _require(xi.is_neutral() and xi.is_renamer(), "not a neutral constant renamer")

    def term(t):
        return apply_replacer(xi, t)

    init = tuple(State(s.index, s.program.map(term), term(s.goal)) for s in d.initial)
    return _replay(init, (_map_step(st, term, lambda th: replace_in_subst(xi, th),
                                    lambda c: xi(c) if c.kind == "const" else c)
                          for st, _ in d.steps))


renameConsts = rename_consts


def avoid_vars(d: Derivation, xs: Iterable[Sym]) -> Derivation:
    """A variant of d none of whose introduced variables lie in xs."""
    xs = frozenset(xs)
    ends = vector_vars(d.initial) | vector_vars(d.last)
    _require(not (xs & ends), "variables to avoid occur in the end vectors")
    bad = sorted(introduced_vars(d) & xs, key=lambda s: s.name)
    if not bad:
        return d
    return rename_vars(d, swap_renaming((x, fresh_var(x.level, x.type, "V")) for x in bad))


avoidVars = avoid_vars


def avoid_consts(d: Derivation, cs: Iterable[Sym]) -> Derivation:
    """A variant of d none of whose generic constants lie in cs."""
    cs = frozenset(cs)
    _require(not (cs & (vector_consts(d.initial) | vector_consts(d.last))),
             "constants to avoid occur in the end vectors")
    bad = sorted(introduced_consts(d) & cs, key=lambda s: s.name)
    if not bad:
        return d
    pairs = {}
    for c in bad:
        e = fresh_const(c.level, c.type, "c")
        pairs[c] = e
        pairs[e] = c
    return rename_consts(d, ConstantReplacer(pairs))


avoidConsts = avoid_consts


# ---------------------------------------------------------------------------
# instantiation


def instantiate(d: Derivation, theta: Substitution | None = None) -> Derivation:
    """A flat derivation of initial(d) theta with identity answer, where theta
    is the computed answer of the successful derivation d."""
    _require(d.successful, "derivation is not successful")
    ans = d.answer
    if theta is not None:
        _require(theta.restrict(vector_vars(d.initial)) == ans,
                 "substitution is not the computed answer")
    steps = [st for st, _ in d.steps]
    n = len(steps)
    suffix = [ID] * (n + 1)
    for t in range(n - 1, -1, -1):
        suffix[t] = compose(steps[t].subst, suffix[t + 1])
    out = Derivation(tuple(s.subst(suffix[0]) for s in d.initial))
    v = out.initial
    for t, st in enumerate(steps, start=1):
        after = suffix[t]
        r = st.rule
        if r in ("true", "sub"):
            continue
        if r == "exists":
            new = Step("instance", st.pos, witness=apply_subst(after, st.witness))
        elif r == "instance":
            new = Step("instance", st.pos, witness=apply_subst(after, st.witness))
        elif r in ("backchain", "axiom"):
            k = Clause(apply_subst(suffix[t - 1], st.clause.term), st.clause.path)
            ws = tuple(fresh_var(w.level, w.type, "W") for w in st.delta)
            gamma = Substitution({w2: apply_subst(after, apply_subst(st.subst, Var(w)))
                                  for w, w2 in zip(st.delta, ws)})
            new = Step(r, st.pos, gamma, clause=k, delta=ws)
        else:
            new = st
        v = apply_rule(v, new)
        out = out.extend(new, v)
    return out


# ---------------------------------------------------------------------------
# transport of flat derivations


class _Transport:
    """Replay a flat derivation through a symbol map.

    ``fixed`` holds the map on the symbols known in advance; symbols met
    later for the first time go through ``policy`` (None keeps them).
    """

    def __init__(self, fixed: dict[Sym, Term], policy: Callable[[Sym], Term | None] | None = None,
                 shift: int = 0):
        self.m: dict[Sym, Term | None] = dict(fixed)
        self.policy = policy or (lambda s: None)
        self.shift = shift

    def term(self, t: Term) -> Term:
        for s in free_vars(t) | constants(t):
            if s not in self.m:
                self.m[s] = self.policy(s)
        return replace_syms(t, {s: v for s, v in self.m.items() if v is not None})

    def state(self, s: State) -> State:
        return State(s.index + self.shift, s.program.map(self.term), self.term(s.goal))

    def run(self, d: Derivation) -> Derivation:
        out = Derivation(tuple(self.state(s) for s in d.initial))
        v = out.initial
        for st, _ in d.steps:
            i = v[st.pos].index
            r = st.rule
            if r in ("true", "sub"):
                raise HypothesisUnmet("derivation is not flat")
            if r == "generic":
                c = fresh_const(i + 1, st.const.type, "c")
                self.m[st.const] = Const(c)
                new = Step("generic", st.pos, const=c)
            elif r == "exists":
                y = fresh_var(i, st.delta[0].type, "Y")
                self.m[st.delta[0]] = Var(y)
                new = Step("exists", st.pos, witness=Var(y), delta=(y,))
            elif r == "instance":
                new = Step("instance", st.pos, witness=self.term(st.witness))
            elif r in ("backchain", "axiom"):
                ws = tuple(fresh_var(i, w.type, "W") for w in st.delta)
                for w, w2 in zip(st.delta, ws):
                    self.m[w] = Var(w2)
                gamma = Substitution({self.m[w].sym: self.term(t) for w, t in st.subst.items()})
                k = Clause(self.term(st.clause.term), st.clause.path)
                new = Step(r, st.pos, gamma, clause=k, delta=ws)
            else:
                new = Step(r, st.pos, side=st.side)
            v = apply_rule(v, new)
            out = out.extend(new, v)
        return out


def _legal_binding(x: Sym, t: Term) -> bool:
    return binding_ok(x, t) and is_positive(t) and level(t) <= x.level


def specialize(d: Derivation, t: Term, x: Sym) -> Derivation:
    """From a flat identity-answer derivation of A, one of A[t/x]."""
    _flat_id(d)
    _require(x.kind == "var", f"{x} is not a variable")
    _require(_legal_binding(x, t), f"{t!r} is not a legal instance for {x}")
    if x not in vector_vars(d.initial):
        return d
    d = avoid_vars(d, free_vars(t) - vector_vars(d.initial))
    d = avoid_consts(d, constants(t) - vector_consts(d.initial))
    return _Transport({x: t}).run(d)


def specialize_by(d: Derivation, theta: Substitution) -> Derivation:
    """From a flat identity-answer derivation of A, one of A theta."""
    _flat_id(d)
    _require(theta.is_legal(), "substitution is not legal")
    theta = theta.restrict(vector_vars(d.initial))
    if theta.is_safe():
        for x, t in theta.items():
            d = specialize(d, t, x)
        return d
    # exchange each x for a fresh w, so both halves are safe
    ws = {x: fresh_var(x.level, x.type, "V") for x in theta.domain}
    rho = Substitution({x: Var(w) for x, w in ws.items()})
    for x, t in theta.items():
        d = specialize(d, apply_subst(rho, t), x)
    for x, w in ws.items():
        d = specialize(d, Var(x), w)
    return d


specializeBy = specialize_by


def replace_const_by_var(d: Derivation, c: Sym, x: Sym) -> Derivation:
    """From an identity-answer derivation of A[c/x], one of A: every c becomes x."""
    _successful_id(d)
    _require(c.kind == "const" and x.kind == "var", "needs a constant and a variable")
    _require(c.type == x.type and c.level <= x.level, f"{c} cannot stand for {x}")
    _require(c not in introduced_consts(d), f"{c} is a generic constant of the derivation")
    _require(x not in vector_vars(d.initial), f"{x} already occurs in the initial vector")
    d = instantiate(d)
    d = avoid_vars(d, {x})
    return _Transport({c: Var(x)}).run(d)


replaceConstByVar = replace_const_by_var


def _threshold(d: Derivation, i: int | None) -> int:
    lo = min((s.index for s in d.initial), default=0)
    if i is None:
        return lo
    _require(lo >= i, f"a state has index below {i}")
    return i


def level_reduce(d: Derivation, xi: ConstantReplacer | None = None,
                 theta: Substitution | None = None, i: int | None = None) -> Derivation:
    """From a flat identity-answer derivation of A with every index >= i > 0,
    one of A xi theta with every index lowered by one, of the same length.

    Symbols of level >= i not covered by xi or theta are sent to fresh
    symbols one level down.
    """
    _flat_id(d)
    i = _threshold(d, i)
    _require(i > 0, "indices must be positive")
    fixed: dict[Sym, Term] = {}
    syms = vector_vars(d.initial) | vector_consts(d.initial)
    for c, e in (xi.items() if xi else ()):
        if c in syms:
            want = c.level - 1 if c.level >= i else c.level
            _require(e.level <= want if c.level >= i else e.level == c.level,
                     f"{c} -> {e} does not lower levels as required")
            fixed[c] = Const(e)
    for x, t in (theta.items() if theta else ()):
        if x in syms:
            _require(binding_ok(x, t) and is_positive(t), f"{t!r}/{x} is not a legal binding")
            want = x.level - 1 if x.level >= i else x.level
            _require(level(t) <= want, f"{t!r}/{x} does not lower levels as required")
            fixed[x] = t

    def policy(s: Sym):
        if s.level < i or s.kind not in ("var", "const"):
            return None
        if s.kind == "var":
            return Var(fresh_var(s.level - 1, s.type, "V"))
        return Const(fresh_const(s.level - 1, s.type, "c"))

    d = avoid_vars(d, free_vars_of(fixed.values()) - vector_vars(d.initial))
    d = avoid_consts(d, consts_of(fixed.values()) - vector_consts(d.initial))
    return _Transport(fixed, policy, shift=-1).run(d)


levelReduce = level_reduce


def level_increase(d: Derivation, xi: ConstantReplacer | None = None, i: int | None = None) -> Derivation:
    """From a flat identity-answer derivation of A with every index >= i, one
    of A xi with every index raised by one, of the same length."""
    _flat_id(d)
    i = _threshold(d, i)
    fixed: dict[Sym, Term] = {}
    syms = vector_consts(d.initial)
    for c, e in (xi.items() if xi else ()):
        if c in syms:
            _require(c.level >= i and e.level == c.level + 1, f"{c} -> {e} does not raise by one")
            fixed[c] = Const(e)
    d = avoid_consts(d, consts_of(fixed.values()) - vector_consts(d.initial))
    return _Transport(fixed, shift=1).run(d)


levelIncrease = level_increase


def free_vars_of(ts: Iterable[Term]) -> frozenset[Sym]:
    return frozenset().union(*(free_vars(t) for t in ts))


def consts_of(ts: Iterable[Term]) -> frozenset[Sym]:
    return frozenset().union(*(constants(t) for t in ts))


# ---------------------------------------------------------------------------
# programs and products


def weaken_program(d: Derivation, new_program: Program | Iterable[Term], pos: int = 0) -> Derivation:
    """Replace the program of the state at pos by one whose elab contains the old one."""
    _flat_id(d)
    p2 = new_program if isinstance(new_program, Program) else Program(new_program)
    _require(0 <= pos < len(d.initial), f"no state at position {pos}")
    s = d.initial[pos]
    _require(set(s.program.elab) <= set(p2.elab), "elab of the new program does not contain the old")
    _require(p2.level <= s.index, "new program exceeds the state index")
    d = avoid_vars(d, p2.free_vars - vector_vars(d.initial))
    d = avoid_consts(d, p2.constants - vector_consts(d.initial))
    init = d.initial[:pos] + (State(s.index, p2, s.goal),) + d.initial[pos + 1:]
    return _replay(init, (st for st, _ in d.steps))


weakenProgram = weaken_program


def product(d1: Derivation, d2: Derivation) -> Derivation:
    """From identity-answer derivations of A and B, one of A followed by B."""
    _successful_id(d1)
    _successful_id(d2)
    a, b = d1.initial, d2.initial
    d1 = instantiate(d1)
    d2 = instantiate(d2)
    d1 = avoid_vars(d1, vector_vars(b) - vector_vars(a))
    d1 = avoid_consts(d1, vector_consts(b) - vector_consts(a))
    used = d1.symbols()
    d2 = avoid_vars(d2, {s for s in used if s.kind == "var"} - vector_vars(b))
    d2 = avoid_consts(d2, {s for s in used if s.kind == "const"} - vector_consts(b))
    out = Derivation(a + b)
    v = out.initial
    for st, _ in d1.steps:
        v = apply_rule(v, st)
        out = out.extend(st, v)
    for st, _ in d2.steps:
        v = apply_rule(v, st)
        out = out.extend(st, v)
    return out


# ---------------------------------------------------------------------------
# generic constants


def _generic_const(d: Derivation, c: Sym | None) -> tuple[State, Sym]:
    _require(len(d.initial) == 1, "expected a single initial state")
    s = d.initial[0]
    if c is None:
        top = [e for e in s.constants if e.level == s.index and s.index > 0]
        _require(len(top) == 1, "cannot tell which constant is generic")
        c = top[0]
    _require(c.level == s.index and s.index > 0, f"{c} is not of the state's top level")
    rest = (s.program.constants | constants(s.goal)) - {c}
    _require(all(e.level < s.index for e in rest), "program and goal exceed level i")
    _require(c not in s.program.constants, f"{c} occurs in the program")
    _require(all(x.level < s.index for x in s.free_vars), "a variable exceeds level i")
    return s, c


def generic_to_instance(d: Derivation, t: Term, c: Sym | None = None) -> Derivation:
    """From <i+1, P ?- G[c/x]> ->id box, a derivation of <i, P ?- G[t/x]>."""
    _successful_id(d)
    if not d.is_flat():
        d = instantiate(d)
    s, c = _generic_const(d, c)
    i = s.index - 1
    _require(is_positive(t) and level(t) <= i, f"{t!r} is not a positive term of level {i}")
    c1 = fresh_const(i, c.type, "c")
    x = fresh_var(i, c.type, "X")
    _require(binding_ok(x, t), f"{t!r} does not fit the binder type")
    d = level_reduce(d, ConstantReplacer({c: c1}), None, s.index)
    d = replace_const_by_var(d, c1, x)
    return specialize(d, t, x)


genericToInstance = generic_to_instance


def instance_to_generic(d: Derivation, c_inst: Sym) -> Derivation:
    """From <i, P ?- G[c'/x]> ->id box with c' a constant of level i foreign to
    P and G, a derivation of <i+1, P ?- G[c/x]> with c fresh of level i+1."""
    _successful_id(d)
    if not d.is_flat():
        d = instantiate(d)
    _require(len(d.initial) == 1, "expected a single initial state")
    s = d.initial[0]
    _require(c_inst.level == s.index, f"{c_inst} is not of level {s.index}")
    _require(c_inst not in s.program.constants, f"{c_inst} occurs in the program")
    c = fresh_const(s.index + 1, c_inst.type, "c")
    return level_increase(d, ConstantReplacer({c_inst: c}), s.index)


instanceToGeneric = instance_to_generic


TRANSFORMATIONS = (
    "instantiate", "specialize", "specialize_by", "rename_vars", "rename_consts", "avoid_vars",
    "avoid_consts", "replace_const_by_var", "level_reduce", "level_increase", "weaken_program",
    "product", "generic_to_instance", "instance_to_generic",
)

__all__ = [
    "instantiate", "specialize", "specialize_by", "specializeBy", "rename_vars", "renameVars",
    "rename_consts", "renameConsts", "avoid_vars", "avoidVars", "avoid_consts", "avoidConsts",
    "replace_const_by_var", "replaceConstByVar", "level_reduce", "levelReduce",
    "level_increase", "levelIncrease", "weaken_program", "weakenProgram", "product",
    "generic_to_instance", "genericToInstance", "instance_to_generic", "instanceToGeneric",
    "introduced_vars", "introduced_consts", "HypothesisUnmet", "TRANSFORMATIONS",
]
