"""Clause elaboration, the extension [j;P] and the transition system ->_i.

elab(D) splits a program formula into clauses ``pi x1..xn (G => A)`` or
``pi x1..xn A`` with rigid heads.  A clause remembers the path that led to
it inside D, a sequence of ``("and", k)`` and ``("all",)`` steps, so that
sequent proofs can rebuild the left rules that extract it.

[j;P] is never built.  Membership is decided by matching a candidate
instance against the clauses of elab(P) with variables of level j, and
enumeration draws the binder instances from a witness pool.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from uctt.binding import Substitution, apply_subst, fresh_var, witnesses
from uctt.terms import (
    AND, IMP, PI, TRUE, P, Sym, Term, TermError, Var, binder_type, constants,
    forall, free_vars, has_type, is_rigid, level, logic_op, open_body, spine,
)


class NotAProgramFormula(TermError):
    pass


# ---------------------------------------------------------------------------
# clauses


@dataclass(frozen=True)
class Clause:
    """pi x1..xn (body => head); body is ``true`` for a bare atom."""

    term: Term
    path: tuple = ()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Clause) and self.term == other.term

    def __hash__(self) -> int:
        return hash(self.term)

    def __repr__(self) -> str:
        return repr(self.term)

    @property
    def binder_types(self) -> list:
        out, t = [], self.term
        while logic_op(t) is PI:
            q = spine(t)[1][0]
            ty = binder_type(q)
            out.append(ty)
            t = open_body(q, Var(Sym("_", ty, 0, "var")))
        return out

    @property
    def is_bare(self) -> bool:
        return self.open(self._placeholders())[0] == TRUE

    def _placeholders(self) -> list[Term]:
        return [Var(Sym(f"_{k}", ty, 0, "var")) for k, ty in enumerate(self.binder_types)]

    def open(self, args: list[Term]) -> tuple[Term, Term]:
        """(body, head) with the binders instantiated to args, in order."""
        t = self.term
        for a in args:
            if logic_op(t) is not PI:
                raise NotAProgramFormula("too many binder instances")
            t = open_body(spine(t)[1][0], a)
        if logic_op(t) is PI:
            raise NotAProgramFormula("too few binder instances")
        if logic_op(t) is IMP:
            g, h = spine(t)[1]
            return g, h
        return TRUE, t

    def rename(self, lvl: int) -> tuple[list[Sym], Term, Term]:
        """Fresh variables of level lvl for the binders, with the opened body and head."""
        ws = [fresh_var(lvl, ty, "W") for ty in self.binder_types]
        body, head = self.open([Var(w) for w in ws])
        return ws, body, head


def _check_program(d: Term) -> None:
    if not has_type(d, P):
        raise NotAProgramFormula(f"{d!r} is not a program formula")


def delta(d: Term) -> int:
    _check_program(d)
    return _delta(d)


def _delta(d: Term) -> int:
    op = logic_op(d)
    if op is AND:
        a, b = spine(d)[1]
        return 1 + max(_delta(a), _delta(b))
    if op is PI:
        q = spine(d)[1][0]
        return 1 + _delta(open_body(q, Var(Sym("_", binder_type(q), 0, "var"))))
    return 0


def elab(d: Term) -> list[Clause]:
    """Clauses of d in left-to-right order, without duplicates."""
    _check_program(d)
    out: dict[Clause, None] = {}
    for k in _elab(d, ()):
        out.setdefault(k, None)
    return list(out)


def _elab(d: Term, path: tuple) -> Iterator[Clause]:
    op = logic_op(d)
    if op is AND:
        a, b = spine(d)[1]
        yield from _elab(a, (*path, ("and", 0)))
        yield from _elab(b, (*path, ("and", 1)))
    elif op is PI:
        q = spine(d)[1][0]
        x = fresh_var(0, binder_type(q), "x")
        for k in _elab(open_body(q, Var(x)), (*path, ("all",))):
            yield Clause(forall(x, k.term), k.path)
    else:
        yield Clause(d, path)


def clause_at(d: Term, path: tuple) -> Term:
    """The sub-formula of d reached by a path, binders left in place."""
    for step in path:
        if step[0] == "and":
            d = spine(d)[1][step[1]]
        else:
            return d
    return d


# ---------------------------------------------------------------------------
# programs


class Program:
    """Finite multiset of program formulas, kept in insertion order."""

    __slots__ = ("formulas", "_elab", "_hash")

    def __init__(self, formulas: Iterable[Term] = ()):
        self.formulas = tuple(formulas)
        for d in self.formulas:
            _check_program(d)
        self._elab = None
        self._hash = None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.formulas == other.formulas

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.formulas)
        return self._hash

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(d) for d in self.formulas) + "}"

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    @property
    def key(self) -> frozenset:
        return frozenset(self.formulas)

    @property
    def elab(self) -> list[Clause]:
        if self._elab is None:
            out: dict[Clause, None] = {}
            for d in self.formulas:
                for k in elab(d):
                    out.setdefault(k, None)
            self._elab = list(out)
        return self._elab

    def elab_with_source(self) -> Iterator[tuple[Term, Clause]]:
        for d in self.formulas:
            for k in elab(d):
                yield d, k

    @property
    def level(self) -> int:
        return max((level(d) for d in self.formulas), default=0)

    @property
    def free_vars(self) -> frozenset[Sym]:
        return frozenset().union(*(free_vars(d) for d in self.formulas))

    @property
    def constants(self) -> frozenset[Sym]:
        return frozenset().union(*(constants(d) for d in self.formulas))

    def augment(self, d: Term) -> "Program":
        return Program((*self.formulas, d))

    def subst(self, theta: Substitution) -> "Program":
        if not len(theta) or not (theta.domain & self.free_vars):
            return self
        return Program(apply_subst(theta, d) for d in self.formulas)

    def map(self, fn) -> "Program":
        return Program(fn(d) for d in self.formulas)


EMPTY = Program()


# ---------------------------------------------------------------------------
# the extension [j;P]


def extension_match(j: int, prog: Program, head: Term, body: Term) -> tuple[Clause, list[Term]] | None:
    """A clause of elab(P) and binder instances of level <= j giving head <- body."""
    from uctt.unify import NonPatternProblem, UnifyError, unify

    frozen = prog.free_vars | free_vars(head) | free_vars(body)
    for k in prog.elab:
        ws, kb, kh = k.rename(j)
        if not is_rigid(kh) or spine(kh)[0] != spine(head)[0]:
            continue
        try:
            sols = list(unify([(kh, head), (kb, body)], frozen=frozen))
        except NonPatternProblem:
            inst = _brute_match(j, prog, k, head, body)
            if inst is not None:
                return k, inst
            continue
        except UnifyError:
            continue
        for theta in sols:
            inst = [apply_subst(theta, Var(w)) for w in ws]
            if any(free_vars(t) - frozen for t in inst):
                # binders occurring in neither head nor body are free to choose
                inst = _close(j, prog, inst, frozen, head, body)
            if inst is not None:
                return k, inst
    return None


def _pool(j, prog, *terms):
    cs = set(prog.constants)
    for t in terms:
        cs |= constants(t)
    return [c for c in cs if c.level <= j]


def _close(j, prog, inst, frozen, head, body):
    pool = _pool(j, prog, head, body)
    fill = {}
    for t in inst:
        for v in free_vars(t) - frozen:
            ts, _ = witnesses(v.type, pool, 3)
            if not ts:
                return None
            fill[v] = ts[0]
    return [apply_subst(Substitution(fill), t) for t in inst]


def _brute_match(j, prog, k, head, body, size: int = 4):
    pool = _pool(j, prog, head, body)
    lists = [witnesses(ty, pool, size)[0] for ty in k.binder_types]
    for inst in itertools.product(*lists):
        kb, kh = k.open(list(inst))
        if kh == head and kb == body:
            return list(inst)
    return None


def atom_instances(j: int, clauses: Iterable[Clause], atom: Term, pool: Iterable[Sym],
                   size_bound: int, frozen: frozenset = frozenset()) -> tuple[list, bool]:
    """Members (clause, binder instances) of the extension with head ``atom``.

    Head unification fixes the binders it can; binders it leaves open are
    drawn from witnesses over ``pool`` up to ``size_bound``.  The flag is
    False when some enumeration was cut by the size bound.
    """
    from uctt.unify import NonPatternProblem, UnifyError, unify

    pool = [c for c in pool if c.level <= j]
    frozen = frozenset(frozen) | free_vars(atom)
    hd = spine(atom)[0]
    out, seen, complete = [], set(), True
    for k in clauses:
        ws, _, head = k.rename(j)
        if spine(head)[0] != hd:
            continue
        try:
            sols = list(unify([(head, atom)], frozen))
        except NonPatternProblem:
            lists = []
            for ty in k.binder_types:
                ts, c = witnesses(ty, pool, size_bound)
                complete &= c
                lists.append(ts)
            cands = [list(x) for x in itertools.product(*lists)]
        except UnifyError:
            continue
        else:
            cands = []
            for theta in sols:
                part = [apply_subst(theta, Var(w)) for w in ws]
                open_vars = sorted({v for t in part for v in free_vars(t) - frozen},
                                   key=lambda v: v.name)
                lists = []
                for v in open_vars:
                    ts, c = witnesses(v.type, [x for x in pool if x.level <= v.level], size_bound)
                    complete &= c
                    lists.append(ts)
                for combo in itertools.product(*lists):
                    th = Substitution(dict(zip(open_vars, combo)))
                    cands.append([apply_subst(th, t) for t in part])
        for inst in cands:
            body, head_i = k.open(inst)
            key = (k, tuple(inst))
            if head_i != atom or key in seen:
                continue
            seen.add(key)
            out.append((k, tuple(inst)))
    return out, complete


def extension_member(j: int, prog: Program, head: Term, body: Term) -> bool:
    if prog.level > j or level(head) > j or level(body) > j:
        return False
    return extension_match(j, prog, head, body) is not None


extensionMember = extension_member


def extension_enumerate(j: int, prog: Program, size_bound: int,
                        pool: Iterable[Sym] = ()) -> Iterator[tuple[Term, Term]]:
    """Members head <- body of [j;P] with binder instances up to size_bound."""
    cs = [c for c in set(pool) | prog.constants if c.level <= j]
    seen = set()
    for k in prog.elab:
        lists = [witnesses(ty, cs, size_bound)[0] for ty in k.binder_types]
        for inst in itertools.product(*lists):
            body, head = k.open(list(inst))
            if (head, body) not in seen:
                seen.add((head, body))
                yield head, body


extensionEnumerate = extension_enumerate


def step_transition(i: int, d: Term, pool: Iterable[Sym] = (), size_bound: int = 3) -> list[Term]:
    """One-step successors of d under ->_i, quantifier instances bounded by size."""
    _check_program(d)
    op = logic_op(d)
    if op is AND:
        return list(spine(d)[1])
    if op is PI:
        q = spine(d)[1][0]
        cs = [c for c in set(pool) | constants(d) if c.level <= i]
        ts, _ = witnesses(binder_type(q), cs, size_bound)
        return [open_body(q, t) for t in ts]
    return []


stepTransition = step_transition


def transition_normal_forms(i: int, d: Term, pool: Iterable[Sym] = (), size_bound: int = 3) -> set[Term]:
    """All Q with d ->_i* Q and Q irreducible."""
    out, todo, seen = set(), [d], set()
    while todo:
        x = todo.pop()
        if x in seen:
            continue
        seen.add(x)
        nxt = step_transition(i, x, pool, size_bound)
        if not nxt:
            out.add(x)
        todo.extend(nxt)
    return out


def as_member(q: Term) -> tuple[Term, Term]:
    """An irreducible program formula read as head <- body."""
    if logic_op(q) is IMP:
        g, h = spine(q)[1]
        return h, g
    return q, TRUE


# ---------------------------------------------------------------------------
# constructive forms of the clause lemmas


def _paths(d: Term) -> dict[tuple, Clause]:
    return {k.path: k for k in _elab(d, ())}


def shift_witness(d: Term, x: Sym, t: Term, k: Clause) -> Term:
    """K' with pi x K' in elab(pi x D) and K'[t/x] = K, for K in elab(D[t/x])."""
    inst = apply_subst(Substitution({x: t}), d)
    by_path = _paths(inst)
    target = next((p for p, c in by_path.items() if c == k), None)
    if target is None:
        raise ValueError("clause is not in the elaboration of the instance")
    kp = _paths(d)[target].term
    if apply_subst(Substitution({x: t}), kp) != k.term:
        raise ValueError("shifted clause does not instantiate back")
    return kp


shiftWitness = shift_witness


def generalize_witness(d: Term, c: Sym, x: Sym, k: Clause) -> Term:
    """K^ in elab(D) with K^[c/x] = K, for K in elab(D[c/x])."""
    from uctt.terms import Const

    return shift_witness(d, x, Const(c), k)


generalizeWitness = generalize_witness


__all__ = [
    "Clause", "NotAProgramFormula", "Program", "EMPTY", "delta", "elab", "clause_at",
    "extension_match", "atom_instances", "extension_member", "extension_enumerate", "step_transition",
    "transition_normal_forms", "as_member", "shift_witness", "generalize_witness",
]
