"""Cut-free sequent proofs for program/goal sequents.

Sequents keep their antecedents as a set, so weakening and contraction
are implicit: a left rule's premise is its conclusion plus the new
formulas.  Every sequent carries an index bounding the levels of its
symbols; ``all_R`` moves to the next index with a constant of that level,
which cannot occur in the conclusion and is therefore fresh.

The prover is focused.  Right rules are applied while the consequent is
compound.  An atomic consequent A is closed by picking an antecedent D
and a clause of elab(D) whose head matches A, then running the left
rules that reach that clause instance: ``and_L`` and ``all_L`` down the
clause path, ending in ``ax`` for a bare atom or in ``imp_L`` whose
right premise is ``ax``.  Such a chain counts as one unit of depth.
Sequents repeated along a branch are pruned, and a search that cut
nothing is a finite failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from uctt.binding import ID, compose, fresh_const
from uctt.elaborate import Clause, Program, atom_instances, elab, extension_match
from uctt.engine.core import DepthExhausted, Derivation, State
from uctt.engine.plans import Plan, realize
from uctt.syntax import print_term
from uctt.terms import (
    AND, FALSE, IMP, OR, PI, SIGMA, TRUE, G, Const, P, Sym, Term, binder_type,
    constants, free_vars, has_type, is_atom, is_positive, is_rigid, level, logic_op,
    open_body, spine,
)


class ProofError(Exception):
    pass


class InvalidProof(ProofError):
    pass


class NotSingleState(ProofError):
    pass


class NotUniform(ProofError):
    pass


@dataclass(frozen=True)
class Sequent:
    antecedents: frozenset
    consequent: Term
    index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "antecedents", frozenset(self.antecedents))

    def add(self, *fs: Term) -> "Sequent":
        return Sequent(self.antecedents | set(fs), self.consequent, self.index)

    def to(self, g: Term, index: int | None = None) -> "Sequent":
        return Sequent(self.antecedents, g, self.index if index is None else index)

    @property
    def constants(self) -> frozenset:
        return frozenset().union(constants(self.consequent), *(constants(d) for d in self.antecedents))

    @property
    def free_vars(self) -> frozenset:
        return frozenset().union(free_vars(self.consequent), *(free_vars(d) for d in self.antecedents))

    def __str__(self) -> str:
        ants = ", ".join(sorted(print_term(d) for d in self.antecedents))
        return f"[{self.index}] {ants} |- {print_term(self.consequent)}"


def sequent(antecedents: Iterable[Term], consequent: Term, index: int = 0) -> Sequent:
    return Sequent(frozenset(antecedents), consequent, index)


RULES = ("top_R", "ax", "and_L", "and_R", "or_L", "or_R", "imp_L", "imp_R",
         "all_L", "all_R", "ex_L", "ex_R", "bot_R")
RIGHT_RULES = ("top_R", "and_R", "or_R", "imp_R", "all_R", "ex_R", "bot_R")


@dataclass(frozen=True)
class ProofTree:
    rule: str
    conclusion: Sequent
    premises: tuple = ()
    witness: Term | None = None
    eigenconstant: Sym | None = None
    principal: Term | None = None

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=0)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def weaken(self, extra: Iterable[Term]) -> "ProofTree":
        extra = frozenset(extra)
        if extra <= self.conclusion.antecedents:
            return self
        c = self.conclusion
        return ProofTree(self.rule, Sequent(c.antecedents | extra, c.consequent, c.index),
                         tuple(p.weaken(extra) for p in self.premises),
                         self.witness, self.eigenconstant, self.principal)


# ---------------------------------------------------------------------------
# validation


def _parts(t: Term):
    return spine(t)[1]


def validate(t: ProofTree) -> None:
    """Raise InvalidProof unless every node instantiates its rule schema."""
    for n in t.nodes():
        _validate_node(n)


def _validate_node(n: ProofTree) -> None:
    c = n.conclusion
    g, gam, i = c.consequent, c.antecedents, c.index
    ps = n.premises
    op = logic_op(g)

    def fail(msg):
        raise InvalidProof(f"{n.rule} at {c}: {msg}")

    def need(k):
        if len(ps) != k:
            fail(f"expected {k} premises")

    def same_index(*qs):
        if any(q.conclusion.index != i for q in qs):
            fail("index changes")

    if n.rule not in RULES:
        fail("unknown rule")
    if n.rule == "top_R":
        need(0)
        if g != TRUE:
            fail("consequent is not true")
    elif n.rule == "ax":
        need(0)
        if not is_atom(g) or g not in gam:
            fail("consequent is not an atomic antecedent")
    elif n.rule == "and_R" or n.rule == "or_R" or n.rule == "imp_R" or n.rule == "bot_R":
        want = {"and_R": AND, "or_R": OR, "imp_R": IMP}.get(n.rule)
        if n.rule == "bot_R":
            need(1)
            q = ps[0].conclusion
            if q.consequent != FALSE or q.antecedents != gam:
                fail("premise is not the same antecedents with false")
            same_index(ps[0])
            return
        if op is not want:
            fail("consequent has the wrong connective")
        b, cc = _parts(g)
        if n.rule == "and_R":
            need(2)
            if [p.conclusion for p in ps] != [c.to(b), c.to(cc)]:
                fail("premises do not match")
        elif n.rule == "or_R":
            need(1)
            if ps[0].conclusion not in (c.to(b), c.to(cc)):
                fail("premise is neither disjunct")
        else:
            need(1)
            if ps[0].conclusion != Sequent(gam | {b}, cc, i):
                fail("premise does not add the antecedent")
    elif n.rule in ("all_R", "ex_R"):
        need(1)
        if op is not (PI if n.rule == "all_R" else SIGMA):
            fail("consequent has the wrong quantifier")
        q = _parts(g)[0]
        prem = ps[0].conclusion
        if n.rule == "all_R":
            e = n.eigenconstant
            if e is None or e.kind != "const" or e.type != binder_type(q):
                fail("needs an eigenconstant of the binder type")
            if e in c.constants or e.level <= i:
                fail(f"{e} is not fresh for the conclusion")
            if prem != Sequent(gam, open_body(q, Const(e)), max(i, e.level)):
                fail("premise is not the instance at the raised index")
        else:
            w = n.witness
            if w is None or not has_type(w, binder_type(q)) or level(w) > i:
                fail("witness has the wrong type or level")
            if prem != c.to(open_body(q, w)):
                fail("premise is not the witness instance")
    else:
        f = n.principal
        if f is None or f not in gam:
            fail("principal formula is not an antecedent")
        fop = logic_op(f)
        if n.rule == "and_L":
            need(1)
            if fop is not AND or ps[0].conclusion != c.add(*_parts(f)):
                fail("premise does not split the conjunction")
        elif n.rule == "or_L":
            need(2)
            if fop is not OR:
                fail("principal is not a disjunction")
            b, cc = _parts(f)
            if [p.conclusion for p in ps] != [c.add(b), c.add(cc)]:
                fail("premises do not split the disjunction")
        elif n.rule == "imp_L":
            need(2)
            if fop is not IMP:
                fail("principal is not an implication")
            b, cc = _parts(f)
            if ps[0].conclusion != c.to(b) or ps[1].conclusion != c.add(cc):
                fail("premises do not match")
        elif n.rule == "all_L":
            need(1)
            if fop is not PI:
                fail("principal is not universal")
            q = _parts(f)[0]
            w = n.witness
            if w is None or not has_type(w, binder_type(q)) or level(w) > i:
                fail("witness has the wrong type or level")
            if ps[0].conclusion != c.add(open_body(q, w)):
                fail("premise is not the witness instance")
        elif n.rule == "ex_L":
            need(1)
            if fop is not SIGMA:
                fail("principal is not existential")
            q = _parts(f)[0]
            e = n.eigenconstant
            if e is None or e in c.constants or e.level > i:
                fail("eigenconstant is not fresh")
            if ps[0].conclusion != c.add(open_body(q, Const(e))):
                fail("premise is not the eigen instance")


def is_valid(t: ProofTree) -> bool:
    try:
        validate(t)
    except InvalidProof:
        return False
    return True


def is_uniform(t: ProofTree) -> bool:
    """Antecedents are programs, consequents goals, quantifier witnesses are
    positive, and compound consequents are introduced by right rules."""
    for n in t.nodes():
        c = n.conclusion
        if not has_type(c.consequent, G) or any(not has_type(d, P) for d in c.antecedents):
            return False
        if n.rule in ("all_L", "ex_R") and not is_positive(n.witness):
            return False
        if not is_atom(c.consequent) and n.rule not in RIGHT_RULES:
            return False
    return True


isUniform = is_uniform


# ---------------------------------------------------------------------------
# focused left chains


def _find_path(gam: Iterable[Term], k: Clause) -> tuple[Term, tuple]:
    for d in sorted(gam, key=repr):
        for kk in elab(d):
            if kk == k:
                return d, kk.path
    raise NotUniform(f"clause {k!r} is not in elab of the antecedents")


def focus(s: Sequent, d: Term, path: tuple, inst: tuple, body_proof: ProofTree | None) -> ProofTree:
    """Left rules from antecedent d down ``path`` to the clause instance
    ``inst``, closing with ax or with imp_L on the body proof."""
    a = s.consequent
    inst = list(inst)

    def go(s: Sequent, f: Term, path: tuple) -> ProofTree:
        if path and path[0][0] == "and":
            parts = _parts(f)
            s2 = s.add(*parts)
            return ProofTree("and_L", s, (go(s2, parts[path[0][1]], path[1:]),), principal=f)
        if logic_op(f) is PI:
            t = inst.pop(0)
            g = open_body(_parts(f)[0], t)
            rest = path[1:] if path and path[0][0] == "all" else path
            return ProofTree("all_L", s, (go(s.add(g), g, rest),), witness=t, principal=f)
        if logic_op(f) is IMP:
            body, head = _parts(f)
            if head != a:
                raise NotUniform("clause instance does not match the consequent")
            if body_proof is None:
                raise NotUniform("missing proof of the clause body")
            left = body_proof.weaken(s.antecedents)
            if left.conclusion != s.to(body):
                raise NotUniform("body proof does not fit")
            right = ProofTree("ax", s.add(head))
            return ProofTree("imp_L", s, (left, right), principal=f)
        if f != a:
            raise NotUniform("clause instance does not match the consequent")
        return ProofTree("ax", s)

    return go(s, d, path)


# ---------------------------------------------------------------------------
# proof search


class Prover:
    def __init__(self, depth: int = 10, witness_size: int = 4, signature: Iterable[Sym] = (),
                 full: bool = False):
        self.depth = depth
        self.witness_size = witness_size
        self.signature = frozenset(signature)
        self.full = full
        self.proved: dict[Sequent, ProofTree] = {}
        self.failed: set[Sequent] = set()
        self.cut_at: dict[Sequent, int] = {}
        self._canon: dict = {}
        self.cut = self.incomplete = self.looped = False

    def canonical(self, lvl: int, ty) -> Sym:
        c = self._canon.get((lvl, ty))
        if c is None:
            c = Sym(f"e{lvl}_{len(self._canon)}", ty, lvl, "const")
            self._canon[(lvl, ty)] = c
        return c

    def pool(self, s: Sequent) -> list[Sym]:
        cs = self.signature | s.constants
        return sorted((c for c in cs if c.level <= s.index and c.kind == "const"), key=lambda c: c.name)

    def prove(self, s: Sequent) -> ProofTree | None:
        cut = False
        for d in range(1, self.depth + 1):
            self.cut = self.incomplete = self.looped = False
            t = self._prove(s, d, frozenset())
            if t is not None:
                return t
            cut = self.cut or self.incomplete
            if not cut:
                return None
        raise DepthExhausted(f"no proof within depth {self.depth}")

    def _prove(self, s: Sequent, d: int, path: frozenset) -> ProofTree | None:
        hit = self.proved.get(s)
        if hit is not None:
            return hit
        if s in self.failed:
            return None
        g = s.consequent
        if g == TRUE:
            return self._done(s, ProofTree("top_R", s))
        if s in path:
            self.looped = True
            return None
        if d == 0 or self.cut_at.get(s, -1) >= d:
            self.cut = True
            return None
        path = path | {s}
        outer = (self.cut, self.incomplete, self.looped)
        self.cut = self.incomplete = self.looped = False
        t = self._search(s, d, path)
        if t is not None:
            self._done(s, t)
        elif not (self.cut or self.incomplete or self.looped):
            self.failed.add(s)
        elif not self.looped:
            self.cut_at[s] = max(self.cut_at.get(s, -1), d)
        self.cut |= outer[0]
        self.incomplete |= outer[1]
        self.looped |= outer[2]
        return t

    def _done(self, s, t):
        self.proved[s] = t
        return t

    def _search(self, s: Sequent, d: int, path) -> ProofTree | None:
        g = s.consequent
        op = logic_op(g)
        if self.full:
            t = self._left_invertible(s, d, path)
            if t is not False:
                return t
        if op is AND:
            b, c = _parts(g)
            p1 = self._prove(s.to(b), d - 1, path)
            if p1 is None:
                return None
            p2 = self._prove(s.to(c), d - 1, path)
            return None if p2 is None else ProofTree("and_R", s, (p1, p2))
        if op is OR:
            for part in _parts(g):
                p = self._prove(s.to(part), d - 1, path)
                if p is not None:
                    return ProofTree("or_R", s, (p,))
            return None
        if op is IMP:
            b, c = _parts(g)
            p = self._prove(Sequent(s.antecedents | {b}, c, s.index), d - 1, path)
            return None if p is None else ProofTree("imp_R", s, (p,))
        if op is PI:
            q = _parts(g)[0]
            e = self.canonical(s.index + 1, binder_type(q))
            p = self._prove(s.to(open_body(q, Const(e)), s.index + 1), d - 1, path)
            return None if p is None else ProofTree("all_R", s, (p,), eigenconstant=e)
        if op is SIGMA:
            from uctt.binding import witnesses

            q = _parts(g)[0]
            ts, complete = witnesses(binder_type(q), self.pool(s), self.witness_size)
            self.incomplete |= not complete
            for t in ts:
                p = self._prove(s.to(open_body(q, t)), d - 1, path)
                if p is not None:
                    return ProofTree("ex_R", s, (p,), witness=t)
            return None
        if is_rigid(g):
            return self._backchain(s, d, path)
        return None

    def _backchain(self, s: Sequent, d: int, path) -> ProofTree | None:
        g = s.consequent
        pool = self.pool(s)
        fv = s.free_vars
        for f in sorted(s.antecedents, key=repr):
            if not has_type(f, P):
                continue
            insts, complete = atom_instances(s.index, elab(f), g, pool, self.witness_size, fv)
            self.incomplete |= not complete
            for k, inst in insts:
                body, _ = k.open(list(inst))
                bp = None
                if _has_body(k):
                    bp = self._prove(s.to(body), d - 1, path)
                    if bp is None:
                        continue
                return focus(s, f, k.path, inst, bp)
        return None

    def _left_invertible(self, s: Sequent, d: int, path):
        """and_L, or_L and ex_L on antecedents outside the program fragment."""
        for f in sorted(s.antecedents, key=repr):
            if has_type(f, P):
                continue
            op = logic_op(f)
            if op is AND:
                parts = _parts(f)
                if set(parts) <= s.antecedents:
                    continue
                p = self._prove(s.add(*parts), d - 1, path)
                return None if p is None else ProofTree("and_L", s, (p,), principal=f)
            if op is OR:
                b, c = _parts(f)
                if b in s.antecedents or c in s.antecedents:
                    continue
                p1 = self._prove(s.add(b), d - 1, path)
                if p1 is None:
                    return None
                p2 = self._prove(s.add(c), d - 1, path)
                return None if p2 is None else ProofTree("or_L", s, (p1, p2), principal=f)
            if op is SIGMA:
                q = _parts(f)[0]
                e = fresh_const(s.index, binder_type(q), "e")
                p = self._prove(s.add(open_body(q, Const(e))), d - 1, path)
                return None if p is None else ProofTree("ex_L", s, (p,), eigenconstant=e, principal=f)
        return False


def _has_body(k: Clause) -> bool:
    from uctt.engine.core import _has_body as hb

    return hb(k)


def prove_cut_free(s: Sequent, depth: int = 10, witness_size: int = 4,
                   signature: Iterable[Sym] = (), full: bool = False) -> ProofTree | None:
    """A cut-free proof of s, None on finite failure, DepthExhausted when cut."""
    return Prover(depth, witness_size, signature, full).prove(s)


proveCutFree = prove_cut_free


def provable(s: Sequent, depth: int = 10, witness_size: int = 4, signature: Iterable[Sym] = ()) -> str:
    """yes, no or unknown."""
    try:
        return "yes" if prove_cut_free(s, depth, witness_size, signature) is not None else "no"
    except DepthExhausted:
        return "unknown"


def leq_t(s1: Sequent, s2: Sequent, depth: int = 10, witness_size: int = 4,
          signature: Iterable[Sym] = ()) -> str:
    """Bounded reading of s1 <=_T s2: holds, fails or unknown."""
    r2 = provable(s2, depth, witness_size, signature)
    if r2 == "yes":
        return "holds"
    r1 = provable(s1, depth, witness_size, signature)
    if r1 == "no":
        return "holds"
    if r1 == "yes" and r2 == "no":
        return "fails"
    return "unknown"


leqT = leq_t


# ---------------------------------------------------------------------------
# derivations and proofs


class _Node:
    __slots__ = ("state", "born", "rule", "children", "data")

    def __init__(self, st: State, born: int):
        self.state = st
        self.born = born
        self.rule = None
        self.children = []
        self.data = None


def derivation_to_proof(d: Derivation) -> ProofTree:
    """The uniform proof read off a successful single-state derivation, with
    every sequent under the derivation's total substitution."""
    if len(d.initial) != 1:
        raise NotSingleState("derivation starts from more than one state")
    if not d.successful:
        raise NotUniform("derivation is not successful")
    steps = [st for st, _ in d.steps]
    n = len(steps)
    suffix = [ID] * (n + 1)
    for t in range(n - 1, -1, -1):
        suffix[t] = compose(steps[t].subst, suffix[t + 1])
    root = _Node(d.initial[0], 0)
    owners = [root]
    for t, (st, nv) in enumerate(d.steps, start=1):
        node = owners[st.pos]
        r = st.rule
        made = []
        if r in ("true", "sub"):
            continue
        node.rule = r
        if r == "and":
            made = [_Node(nv[st.pos], t), _Node(nv[st.pos + 1], t)]
        elif r in ("or", "augment", "instance", "exists", "generic", "backchain"):
            made = [_Node(nv[st.pos], t)]
        if r in ("instance", "exists"):
            node.data = (st.witness, t)
        elif r == "generic":
            node.data = st.const
        elif r in ("backchain", "axiom"):
            node.data = (st.clause, st.delta, t)
        node.children = made
        owners = owners[:st.pos] + made + owners[st.pos + 1:]
    return _build(root, suffix)


derivationToProof = derivation_to_proof


def _final_sequent(node: _Node, suffix) -> Sequent:
    s = node.state.subst(suffix[node.born])
    return Sequent(frozenset(s.program.formulas), s.goal, s.index)


def _build(node: _Node, suffix) -> ProofTree:
    from uctt.binding import apply_subst
    from uctt.terms import Var

    s = _final_sequent(node, suffix)
    kids = [_build(c, suffix) for c in node.children]
    r = node.rule
    if r is None:
        if s.consequent == TRUE:
            return ProofTree("top_R", s)
        raise NotUniform(f"state {s} was never closed")
    if r == "null":
        return ProofTree("top_R", s)
    if r == "and":
        return ProofTree("and_R", s, tuple(kids))
    if r == "or":
        return ProofTree("or_R", s, tuple(kids))
    if r == "augment":
        return ProofTree("imp_R", s, tuple(kids))
    if r in ("instance", "exists"):
        w, t = node.data
        return ProofTree("ex_R", s, tuple(kids), witness=apply_subst(suffix[t - 1], w))
    if r == "generic":
        return ProofTree("all_R", s, tuple(kids), eigenconstant=node.data)
    k, ws, t = node.data
    k = Clause(apply_subst(suffix[t - 1], k.term), k.path)
    inst = tuple(apply_subst(suffix[t - 1], Var(w)) for w in ws)
    f, path = _find_path(s.antecedents, k)
    return focus(s, f, path, inst, kids[0] if kids else None)


def proof_to_plan(t: ProofTree, prog: Program) -> Plan:
    """A plan replaying a uniform proof on a state with program ``prog``."""
    c = t.conclusion
    r = t.rule
    if r == "top_R":
        return Plan("null")
    if r == "and_R":
        return Plan("and", (), tuple(proof_to_plan(p, prog) for p in t.premises))
    if r == "or_R":
        side = list(_parts(c.consequent)).index(t.premises[0].conclusion.consequent)
        return Plan("or", (side,), (proof_to_plan(t.premises[0], prog),))
    if r == "imp_R":
        d = _parts(c.consequent)[0]
        return Plan("augment", (), (proof_to_plan(t.premises[0], prog.augment(d)),))
    if r == "all_R":
        return Plan("generic", (t.eigenconstant,), (proof_to_plan(t.premises[0], prog),))
    if r == "ex_R":
        return Plan("instance", (t.witness,), (proof_to_plan(t.premises[0], prog),))
    if is_atom(c.consequent) and r in ("ax", "and_L", "all_L", "imp_L"):
        return _left_plan(t, prog, c.index, {})
    raise NotUniform(f"{r} is outside the uniform fragment")


def _left_plan(t: ProofTree, prog: Program, i: int, pending: dict) -> Plan:
    a = t.conclusion.consequent
    if t.rule == "ax":
        if a in pending:
            body, bt = pending[a]
            m = extension_match(i, prog, a, body)
            if m is None:
                raise NotUniform(f"{print_term(body)} => {print_term(a)} is not in the extension")
            return Plan("backchain", (m[0], tuple(m[1])), (proof_to_plan(bt, prog),))
        m = extension_match(i, prog, a, TRUE)
        if m is None:
            raise NotUniform(f"{print_term(a)} is not in the extension")
        k = m[0]
        return Plan("axiom" if not _has_body(k) else "backchain", (k, tuple(m[1])),
                    () if not _has_body(k) else (Plan("null"),))
    if t.rule in ("and_L", "all_L"):
        return _left_plan(t.premises[0], prog, i, pending)
    if t.rule == "imp_L":
        body, head = _parts(t.principal)
        nxt = dict(pending)
        if head == a:
            nxt[head] = (body, t.premises[0])
        return _left_plan(t.premises[1], prog, i, nxt)
    raise NotUniform(f"{t.rule} under an atomic consequent")


def proof_to_derivation(t: ProofTree, i: int | None = None) -> Derivation:
    if not is_uniform(t):
        raise NotUniform("proof is not uniform")
    c = t.conclusion
    i = c.index if i is None else i
    prog = Program(sorted(c.antecedents, key=repr))
    return realize(State(i, prog, c.consequent), proof_to_plan(t, prog))


proofToDerivation = proof_to_derivation


def absorb_clause(t: ProofTree, k: Term, d: Term) -> ProofTree:
    """From a proof of Gamma, K |- G with K in elab(D), a proof of Gamma, D |- G."""
    if Clause(k) not in elab(d):
        raise NotUniform("clause is not in the elaboration of the formula")
    c = t.conclusion
    gam = (c.antecedents - {k}) | {d}
    prog = Program(sorted(gam, key=repr))
    der = realize(State(c.index, prog, c.consequent), proof_to_plan(t, prog))
    return derivation_to_proof(der)


# ---------------------------------------------------------------------------
# serialization


def to_sexpr(t: ProofTree, indent: int = 0) -> str:
    pad = " " * indent
    head = f"({t.rule} \"{t.conclusion}\""
    if t.principal is not None:
        head += f" :on \"{print_term(t.principal)}\""
    if t.witness is not None:
        head += f" :with \"{print_term(t.witness)}\""
    if t.eigenconstant is not None:
        head += f" :fresh {t.eigenconstant.name}"
    if not t.premises:
        return pad + head + ")"
    inner = "\n".join(to_sexpr(p, indent + 2) for p in t.premises)
    return f"{pad}{head}\n{inner})"


__all__ = [
    "Sequent", "sequent", "ProofTree", "RULES", "ProofError", "InvalidProof", "NotSingleState",
    "NotUniform", "DepthExhausted", "validate", "is_valid", "is_uniform", "isUniform", "focus",
    "Prover", "prove_cut_free", "proveCutFree", "provable", "leq_t", "leqT",
    "derivation_to_proof", "derivationToProof", "proof_to_plan", "proof_to_derivation",
    "proofToDerivation", "absorb_clause", "to_sexpr",
]
