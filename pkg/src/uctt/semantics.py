"""The bottom-up T operator over the two-element lattice, its least fixed
point, derivation extraction and substitution-semantics membership.

A node is a triple (i, P, G).  Expanding a node lists the nodes its value
depends on:

    true        none; always top
    atom A      the bodies G of members A <- G of [i;P]   (join)
    G1 /\\ G2    G1 and G2                                  (meet)
    G1 \\/ G2    G1 and G2                                  (join)
    Q => G      (i, P + Q, G)
    exists x G  G[t/x] for enumerated positive t of level <= i (join)
    forall x G  (i+1, P, G[c/x]) for one canonical constant c of level i+1

and T^k(I_bot) at a node is the corresponding combination of the
children's values at k-1, with T^0 true only on ``true``.  Flexible atoms
have no members, so they stay at bottom.

Enumerations are bounded by a term size, so a node may be *incomplete*.
``ifix_query`` explores the node graph up to the fuel limit and iterates
T on it.  Its top answers are exact; a bottom answer is exact only when
the whole reachable graph was explored and every enumeration was
complete.  Otherwise the answer is ``unknown``.  Repeated nodes are
shared, so cycles such as ``p :- q. q :- p.`` saturate instead of
consuming fuel.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from uctt.binding import Substitution, apply_subst, witnesses
from uctt.elaborate import Clause, Program, atom_instances
from uctt.engine.core import DepthExhausted, Derivation, State
from uctt.engine.plans import Plan, realize
from uctt.engine.search import SearchConfig, id_success
from uctt.terms import (
    AND, IMP, OR, PI, SIGMA, TRUE, Const, Sym, Term, binder_type, constants, is_flex, is_rigid, logic_op, open_body, spine,
)


class Lattice2(enum.Enum):
    BOT = 0
    TOP = 1

    def __le__(self, other: "Lattice2") -> bool:
        return self.value <= other.value

    def __lt__(self, other: "Lattice2") -> bool:
        return self.value < other.value

    def join(self, other: "Lattice2") -> "Lattice2":
        return self if self.value >= other.value else other

    def meet(self, other: "Lattice2") -> "Lattice2":
        return self if self.value <= other.value else other


TOP, BOT = Lattice2.TOP, Lattice2.BOT


class CertificateMismatch(Exception):
    pass


@dataclass
class Bounds:
    witness_size: int = 4
    signature: frozenset = frozenset()
    canon_tag: str = "k"


@dataclass
class Node:
    kind: str
    children: list = field(default_factory=list)
    # per child: how the certificate step is rebuilt
    labels: list = field(default_factory=list)
    complete: bool = True


Key = tuple  # (index, program key, goal)


def _key(i: int, prog: Program, g: Term) -> Key:
    return (i, prog.key, g)


class Evaluator:
    """Node graph, memoised iterates T^k(I_bot) and certificates."""

    def __init__(self, bounds: Bounds | None = None):
        self.bounds = bounds or Bounds()
        self.nodes: dict[Key, Node] = {}
        self.progs: dict[Key, Program] = {}
        self.memo: dict[tuple, Lattice2] = {}
        self._lock = threading.Lock()
        self._canon: dict[tuple, Sym] = {}

    # canonical generic constants ------------------------------------------

    def canonical(self, lvl: int, ty) -> Sym:
        k = (lvl, ty)
        c = self._canon.get(k)
        if c is None:
            c = Sym(f"{self.bounds.canon_tag}{lvl}_{len(self._canon)}", ty, lvl, "const")
            self._canon[k] = c
        return c

    def pool(self, i: int, prog: Program, g: Term) -> list[Sym]:
        cs = set(self.bounds.signature) | prog.constants | constants(g)
        return sorted((c for c in cs if c.level <= i and c.kind == "const"), key=lambda c: c.name)

    # expansion -----------------------------------------------------------

    def node(self, i: int, prog: Program, g: Term) -> Node:
        k = _key(i, prog, g)
        n = self.nodes.get(k)
        if n is None:
            n = self._expand(i, prog, g)
            with self._lock:
                self.nodes.setdefault(k, n)
                self.progs.setdefault(k, prog)
        return self.nodes[k]

    def _expand(self, i: int, prog: Program, g: Term) -> Node:
        if g == TRUE:
            return Node("top")
        op = logic_op(g)
        if op in (AND, OR):
            a, b = spine(g)[1]
            return Node("and" if op is AND else "or", [(i, prog, a), (i, prog, b)], [0, 1])
        if op is IMP:
            d, body = spine(g)[1]
            return Node("imp", [(i, prog.augment(d), body)], [None])
        if op is SIGMA:
            q = spine(g)[1][0]
            ts, complete = witnesses(binder_type(q), self.pool(i, prog, g), self.bounds.witness_size)
            return Node("exists", [(i, prog, open_body(q, t)) for t in ts], ts, complete)
        if op is PI:
            q = spine(g)[1][0]
            c = self.canonical(i + 1, binder_type(q))
            return Node("forall", [(i + 1, prog, open_body(q, Const(c)))], [c])
        if is_rigid(g):
            return self._atom(i, prog, g)
        if is_flex(g):
            return Node("atom")
        return Node("atom")

    def _atom(self, i: int, prog: Program, a: Term) -> Node:
        insts, complete = atom_instances(i, prog.elab, a, self.pool(i, prog, a),
                                         self.bounds.witness_size, prog.free_vars)
        out = Node("atom", complete=complete)
        for k, inst in insts:
            out.children.append((i, prog, k.open(list(inst))[0]))
            out.labels.append((k, inst))
        return out

    # iterates ------------------------------------------------------------

    def t_eval(self, k: int, i: int, prog: Program, g: Term) -> Lattice2:
        """T^k(I_bot)_i(P, G)."""
        mk = (k, _key(i, prog, g))
        hit = self.memo.get(mk)
        if hit is not None:
            return hit
        if g == TRUE:
            val = TOP
        elif k == 0:
            val = BOT
        else:
            n = self.node(i, prog, g)
            vals = (self.t_eval(k - 1, *c) for c in n.children)
            if n.kind == "and":
                val = TOP if all(v is TOP for v in vals) else BOT
            elif n.kind in ("imp", "forall"):
                val = next(vals)
            else:
                val = TOP if any(v is TOP for v in vals) else BOT
        with self._lock:
            self.memo[mk] = val
        return val

    # fixed point -----------------------------------------------------------

    def explore(self, i: int, prog: Program, g: Term, max_depth: int) -> tuple[bool, bool]:
        """Expand the reachable graph to max_depth.  Returns (saturated, complete)."""
        frontier = [(i, prog, g)]
        seen = {_key(i, prog, g)}
        complete = True
        for _ in range(max_depth):
            nxt = []
            for c in frontier:
                n = self.node(*c)
                complete &= n.complete
                for ch in n.children:
                    kk = _key(*ch)
                    if kk not in seen:
                        seen.add(kk)
                        nxt.append(ch)
            frontier = nxt
            if not frontier:
                return True, complete
        # nodes still waiting for expansion
        pending = [c for c in frontier if c[2] != TRUE]
        return not pending, complete

    def ifix_query(self, i: int, prog: Program, g: Term, max_fuel: int) -> "IFixResult":
        for k in range(max_fuel + 1):
            if self.t_eval(k, i, prog, g) is TOP:
                return IFixResult("top", k)
        saturated, complete = self.explore(i, prog, g, max_fuel * 4 + 8)
        if saturated and complete and self._least_fixpoint(i, prog, g) is BOT:
            return IFixResult("bot", max_fuel)
        return IFixResult("unknown", max_fuel)

    def _least_fixpoint(self, i, prog, g) -> Lattice2:
        """Kleene iteration over the explored (finite) graph."""
        keys = []
        todo, seen = [_key(i, prog, g)], set()
        while todo:
            k = todo.pop()
            if k in seen:
                continue
            seen.add(k)
            keys.append(k)
            n = self.nodes.get(k)
            if n is None:
                if k[2] != TRUE:
                    return TOP  # unexplored node: be conservative
                continue
            todo.extend(_key(*c) for c in n.children)
        val = {k: (k[2] == TRUE) for k in keys}
        changed = True
        while changed:
            changed = False
            for k in keys:
                if val[k]:
                    continue
                n = self.nodes.get(k)
                if n is None:
                    continue
                cs = [val[_key(*c)] for c in n.children]
                if n.kind == "and":
                    v = all(cs)
                elif n.kind in ("imp", "forall"):
                    v = cs[0]
                elif n.kind == "top":
                    v = True
                else:
                    v = any(cs)
                if v:
                    val[k] = True
                    changed = True
        return TOP if val[_key(i, prog, g)] else BOT

    # certificates ----------------------------------------------------------

    def plan(self, k: int, i: int, prog: Program, g: Term) -> Plan:
        """A resolution plan following the certificate T^k = top."""
        if self.t_eval(k, i, prog, g) is not TOP:
            raise CertificateMismatch(f"T^{k} is not top at {g!r}")
        if g == TRUE:
            return Plan("null")
        n = self.node(i, prog, g)
        ok = [j for j, c in enumerate(n.children) if self.t_eval(k - 1, *c) is TOP]
        if n.kind == "and":
            return Plan("and", (), tuple(self.plan(k - 1, *c) for c in n.children))
        if not ok:
            raise CertificateMismatch(f"no certifying child at {g!r}")
        j = ok[0]
        c = n.children[j]
        sub = self.plan(k - 1, *c)
        if n.kind == "or":
            return Plan("or", (j,), (sub,))
        if n.kind == "imp":
            return Plan("augment", (), (sub,))
        if n.kind == "exists":
            return Plan("instance", (n.labels[j],), (sub,))
        if n.kind == "forall":
            return Plan("generic", (n.labels[j],), (sub,))
        clause, inst = n.labels[j]
        if _bare(clause):
            return Plan("axiom", (clause, inst))
        return Plan("backchain", (clause, inst), (sub,))


def _bare(k: Clause) -> bool:
    from uctt.engine.core import _has_body

    return not _has_body(k)


@dataclass(frozen=True)
class IFixResult:
    status: str  # top | bot | unknown
    fuel: int

    @property
    def value(self) -> Lattice2:
        return TOP if self.status == "top" else BOT


# module-level API ------------------------------------------------------------

_default = Evaluator()


def _as_program(p) -> Program:
    return p if isinstance(p, Program) else Program(p)


def t_eval(k: int, i: int, prog, g: Term, bounds: Bounds | None = None,
           evaluator: Evaluator | None = None) -> Lattice2:
    ev = evaluator or (Evaluator(bounds) if bounds else _default)
    return ev.t_eval(k, i, _as_program(prog), g)


tEval = t_eval


def ifix_query(i: int, prog, g: Term, max_fuel: int = 8, bounds: Bounds | None = None,
               evaluator: Evaluator | None = None) -> IFixResult:
    ev = evaluator or (Evaluator(bounds) if bounds else _default)
    return ev.ifix_query(i, _as_program(prog), g, max_fuel)


ifixQuery = ifix_query


def extract_derivation(k: int, i: int, prog, g: Term, bounds: Bounds | None = None,
                       evaluator: Evaluator | None = None) -> Derivation:
    ev = evaluator or (Evaluator(bounds) if bounds else _default)
    prog = _as_program(prog)
    p = ev.plan(k, i, prog, g)
    return realize(State(i, prog, g), p)


extractDerivation = extract_derivation


class IllegalTheta(Exception):
    pass


def is_member(theta: Substitution, i: int, prog, g: Term, cfg: SearchConfig | None = None) -> bool:
    """theta in (I_s)_i(P, G): the instance succeeds with identity answer."""
    if not theta.is_safe() or not theta.is_legal() or theta.level > i:
        raise IllegalTheta(f"{theta!r} is not a safe legal substitution of level <= {i}")
    prog = _as_program(prog)
    cfg = cfg or SearchConfig()
    v = State(i, prog.subst(theta), apply_subst(theta, g))
    out = id_success(v, cfg)
    if out.status == "exhausted":
        raise DepthExhausted("membership undecided within bounds")
    return out.success


isMember = is_member


__all__ = [
    "Lattice2", "TOP", "BOT", "Bounds", "Evaluator", "IFixResult", "CertificateMismatch",
    "t_eval", "tEval", "ifix_query", "ifixQuery", "extract_derivation", "extractDerivation",
    "is_member", "isMember", "IllegalTheta",
]
