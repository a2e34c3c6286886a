"""Iterative-deepening backtracking search over the resolution systems.

Three systems are available.  ``rest`` uses the instance rule with
witnesses enumerated by size, ``resy`` replaces it with a fresh logic
variable left to unification, and ``star`` is ``resy`` plus the sub rule,
which binds one free variable of the selected state to a witness.

The selected state is the leftmost one whose goal is not a flexible atom;
flexible atoms wait until nothing else is left, since the true rule would
otherwise commit them to ``true`` before unification had a say.

A pass at depth n visits every derivation of at most n steps and reports
only those of exactly n steps, so deepening never repeats an answer.  The
search stops at the first depth whose pass cut no branch.  A search that
found nothing is a finite failure only if no branch was cut and every
witness enumeration and unification problem was handled completely.

When answers are irrelevant (identity-answer search, or a closed initial
vector) a branch is pruned without counting as a cut if its vector
contains every state of one of its ancestors, up to renaming of symbols
absent from the initial vector.  States are compared in groups linked by
shared bindable variables, since only such groups succeed independently.
A success below the pruned branch would contain a shorter success of the
ancestor, so the shortest successes are never lost.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from uctt.binding import Substitution, fresh_var, witnesses
from uctt.engine.core import (
    Derivation, DepthExhausted, State, Step, Vector, _shape, apply_rule,
    fresh_delta, fresh_generic, initial, vector_consts, vector_vars,
)
from uctt.terms import Abs, App, Const, Sym, Term, Var, binder_type, spine
from uctt.unify import NonPatternProblem, NotFlex, UnifyError, solve_flex_top, unify

SYSTEMS = ("rest", "resy", "star")


@dataclass
class SearchConfig:
    system: str = "rest"
    depth: int = 8
    witness_size: int = 4
    max_solutions: int = 1
    signature: Iterable[Sym] = ()
    identity_only: bool = False

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system}")
        if self.depth < 1:
            raise ValueError("depth bound must be at least 1")
        self.signature = frozenset(self.signature)


@dataclass
class Outcome:
    status: str  # success | failure | exhausted
    answers: list = field(default_factory=list)
    depth_reached: int = 0
    nodes: int = 0

    @property
    def success(self) -> bool:
        return self.status == "success"


def select(v: Vector) -> int:
    for k, s in enumerate(v):
        if _shape(s.goal) != "flex":
            return k
    return 0


def state_pool(s: State, signature: Iterable[Sym]) -> list[Sym]:
    """Constants of U_i available as witnesses for a state of index i."""
    cs = set(signature) | s.constants
    return sorted((c for c in cs if c.level <= s.index and c.kind == "const"), key=lambda c: c.name)


class _Search:
    def __init__(self, v: Vector, cfg: SearchConfig):
        self.v = tuple(v)
        self.cfg = cfg
        self.frozen = vector_vars(self.v) if cfg.identity_only else frozenset()
        self.incomplete = False
        self.cut = False
        self.nodes = 0
        self.loop_check = cfg.identity_only or not vector_vars(self.v)
        self.fixed = vector_vars(self.v) | vector_consts(self.v)
        self.pruned = 0

    def successors(self, v: Vector) -> Iterator[tuple[Step, Vector]]:
        pos = select(v)
        s = v[pos]
        shape = _shape(s.goal)
        goal, i = s.goal, s.index
        cfg = self.cfg
        if shape == "top":
            yield self._do(v, Step("null", pos))
        elif shape == "and":
            yield self._do(v, Step("and", pos))
        elif shape == "or":
            for side in (0, 1):
                yield self._do(v, Step("or", pos, side=side))
        elif shape == "imp":
            yield self._do(v, Step("augment", pos))
        elif shape == "forall":
            yield self._do(v, Step("generic", pos, const=fresh_generic(goal, i)))
        elif shape == "exists":
            q = spine(goal)[1][0]
            ty = binder_type(q)
            if cfg.system == "rest":
                ts, complete = witnesses(ty, state_pool(s, cfg.signature), cfg.witness_size)
                if not complete:
                    self.incomplete = True
                for t in ts:
                    yield self._do(v, Step("instance", pos, witness=t))
            else:
                y = fresh_var(i, ty, "Y")
                yield self._do(v, Step("exists", pos, witness=Var(y), delta=(y,)))
        elif shape == "rigid":
            hsym = spine(goal)[0]
            for k in s.program.elab:
                ws = fresh_delta(k, i)
                body, head = k.open([Var(w) for w in ws])
                if spine(head)[0] != hsym:
                    continue
                try:
                    sols = list(unify([(goal, head)], self.frozen))
                except NonPatternProblem:
                    self.incomplete = True
                    continue
                except UnifyError:
                    continue
                rule = "axiom" if _bare(k) else "backchain"
                for theta in sols:
                    yield self._do(v, Step(rule, pos, theta, clause=k, delta=ws))
        elif shape == "flex":
            h = spine(goal)[0]
            if h.sym not in self.frozen:
                try:
                    theta = solve_flex_top(goal)
                    yield self._do(v, Step("true", pos, theta))
                except NotFlex:
                    pass
        if cfg.system == "star":
            yield from self._sub_steps(v, pos)

    def _sub_steps(self, v, pos):
        s = v[pos]
        pool = state_pool(s, self.cfg.signature)
        for x in sorted(s.free_vars - self.frozen, key=lambda x: x.name):
            ts, complete = witnesses(x.type, [c for c in pool if c.level <= x.level],
                                     self.cfg.witness_size)
            if not complete:
                self.incomplete = True
            for t in ts:
                yield self._do(v, Step("sub", pos, Substitution({x: t})))

    def _do(self, v, step):
        return step, apply_rule(v, step)

    def dfs(self, d: Derivation, budget: int, exact: int, path: tuple = ()) -> Iterator[Derivation]:
        self.nodes += 1
        v = d.last
        if not v:
            if len(d) == exact:
                yield d
            return
        if self.loop_check:
            key = Counter(component_keys(v, self.fixed))
            if any(all(key[k] >= n for k, n in anc.items()) for anc in path):
                self.pruned += 1
                return
            path = (*path, key)
        if budget == 0:
            self.cut = True
            return
        for step, nv in list(self.successors(v)):
            yield from self.dfs(d.extend(step, nv), budget - 1, exact, path)

    def run(self) -> Iterator[tuple[Substitution, Derivation]]:
        seen = set()
        found = 0
        for n in range(1, self.cfg.depth + 1):
            self.cut = False
            self.depth_reached = n
            for d in self.dfs(initial(self.v), n, n):
                key = canonical(d.answer)
                if key in seen:
                    continue
                seen.add(key)
                found += 1
                yield d.answer, d
                if found >= self.cfg.max_solutions:
                    return
            if not self.cut:
                return
        self.cut = True


def _bare(k) -> bool:
    from uctt.engine.core import _has_body

    return not _has_body(k)


def variant_key(v: Vector, fixed: frozenset) -> tuple:
    """v with symbols outside ``fixed`` renamed in order of first occurrence."""
    names: dict[Sym, str] = {}

    def walk(t: Term):
        if isinstance(t, (Var, Const)):
            x = t.sym
            if x in fixed:
                return x
            if x not in names:
                names[x] = f"{x.kind}{x.level}:{x.type}#{len(names)}"
            return names[x]
        if isinstance(t, App):
            return (walk(t.head), *(walk(a) for a in t.args))
        if isinstance(t, Abs):
            return ("\\", t.ty, walk(t.body))
        return t

    return tuple((s.index, tuple(walk(f) for f in s.program.formulas), walk(s.goal)) for s in v)


def component_keys(v: Vector, fixed: frozenset) -> list[tuple]:
    """Variant keys of the groups of states of v linked by shared variables outside fixed."""
    parent = list(range(len(v)))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    owner: dict[Sym, int] = {}
    for k, s in enumerate(v):
        for x in s.free_vars - fixed:
            if x in owner:
                parent[find(k)] = find(owner[x])
            else:
                owner[x] = k
    groups: dict[int, list[State]] = {}
    for k, s in enumerate(v):
        groups.setdefault(find(k), []).append(s)
    return [variant_key(g, fixed) for g in groups.values()]


def canonical(theta: Substitution) -> tuple:
    """A key equal for substitutions that differ only in fresh range variables."""
    from uctt.terms import free_vars, replace_syms

    names: dict[Sym, Term] = {}
    out = []
    for x in sorted(theta.domain, key=lambda s: s.name):
        t = theta[x]
        for y in sorted(free_vars(t) - theta.domain, key=lambda s: s.name):
            if y not in names:
                names[y] = Var(Sym(f"_{len(names)}", y.type, y.level, "var"))
        out.append((x, replace_syms(t, names)))
    return tuple(out)


def solve(v: Vector | State, cfg: SearchConfig | None = None) -> Iterator[tuple[Substitution, Derivation]]:
    """Answers with their derivations; ends with DepthExhausted when the bounds cut the search."""
    cfg = cfg or SearchConfig()
    v = (v,) if isinstance(v, State) else tuple(v)
    s = _Search(v, cfg)
    count = 0
    for ans in s.run():
        count += 1
        yield ans
    if count < cfg.max_solutions and (s.cut or s.incomplete):
        raise DepthExhausted(f"bounds reached at depth {cfg.depth}")


def search(v: Vector | State, cfg: SearchConfig | None = None) -> Outcome:
    cfg = cfg or SearchConfig()
    v = (v,) if isinstance(v, State) else tuple(v)
    s = _Search(v, cfg)
    answers = list(s.run())
    if answers:
        status = "success"
    elif s.cut or s.incomplete:
        status = "exhausted"
    else:
        status = "failure"
    return Outcome(status, answers, getattr(s, "depth_reached", 0), s.nodes)


def id_success(v: Vector | State, cfg: SearchConfig | None = None) -> Outcome:
    """Search restricted to derivations with identity computed answer."""
    cfg = cfg or SearchConfig()
    cfg = SearchConfig(cfg.system, cfg.depth, cfg.witness_size, 1, cfg.signature, True)
    return search(v, cfg)
