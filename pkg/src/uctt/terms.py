"""Simple types, typed lambda terms and formula classification.

Types are base types or arrows.  The formula types of the fragment are

    r  rigid atoms        a  atoms           h  positive formulas
    p  programs           g  goals           o  all formulas

ordered by r <= a, a <= h, a <= g, a <= p, h <= g and each of them <= o.

Terms use de Bruijn indices for bound variables and named symbols for
constants and free (logic) variables, so capture cannot happen.  Every
term handed out by this module is beta-normal and eta-contracted.  A
normal term is an ``Abs`` around a spine ``App(head, args)`` whose head is
a ``Const``, ``Var`` or ``BVar``; a head with no arguments stands alone.

Formula types are decided by the program/goal grammar rather than by a
single principal type, because a term such as ``q => p`` is both a
program clause and a goal.  ``has_type`` is the precise membership test
and ``type_of`` picks the least member of r, a, h, p, g, o that fits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence


class TermError(Exception):
    pass


class TypeMismatch(TermError):
    pass


class UnboundIndex(TermError):
    pass


class NotASubtype(TermError):
    pass


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        d = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{d} -> {self.cod}"


SimpleType = BaseType | Arrow

IOTA = BaseType("i")
O = BaseType("o")
H = BaseType("h")
A = BaseType("a")
R = BaseType("r")
P = BaseType("p")
G = BaseType("g")

FORMULA_TYPES = frozenset({O, H, A, R, P, G})

# reflexive-transitive closure of the inclusion diagram
_ABOVE = {
    R: {R, A, H, G, P, O},
    A: {A, H, G, P, O},
    H: {H, G, O},
    P: {P, O},
    G: {G, O},
    O: {O},
}


def arrow(*tys: SimpleType) -> SimpleType:
    """Right-associated arrow: arrow(a, b, c) is a -> (b -> c)."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def arg_types(ty: SimpleType) -> tuple[list[SimpleType], SimpleType]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


def subtype(s: SimpleType, t: SimpleType) -> bool:
    if s == t:
        return True
    if isinstance(s, Arrow) and isinstance(t, Arrow):
        return subtype(t.dom, s.dom) and subtype(s.cod, t.cod)
    if isinstance(s, BaseType) and isinstance(t, BaseType):
        return t in _ABOVE.get(s, ())
    return False


def is_formula_type(ty: SimpleType) -> bool:
    return arg_types(ty)[1] in FORMULA_TYPES


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class Sym:
    """A constant, logic variable or logical constant with its level label."""

    name: str
    type: SimpleType | None
    level: int = 0
    kind: str = "const"  # const | var | logic

    def __str__(self) -> str:
        return self.name


SymbolRef = Sym

TOP = Sym("true", None, 0, "logic")
BOT = Sym("false", None, 0, "logic")
AND = Sym("&", None, 0, "logic")
OR = Sym(";", None, 0, "logic")
IMP = Sym("=>", None, 0, "logic")
SIGMA = Sym("sigma", None, 0, "logic")
PI = Sym("pi", None, 0, "logic")

LOGICAL = {s.name: s for s in (TOP, BOT, AND, OR, IMP, SIGMA, PI)}
_ARITY = {TOP: 0, BOT: 0, AND: 2, OR: 2, IMP: 2, SIGMA: 1, PI: 1}


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ("_hash", "_fv", "_consts", "_level")

    def _key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = self._hash = hash(self._key())
        return h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __repr__(self) -> str:
        return show(self)

    def __init__(self) -> None:
        self._hash = None
        self._fv = None
        self._consts = None
        self._level = None


class Const(Term):
    __slots__ = ("sym",)

    def __init__(self, sym: Sym):
        super().__init__()
        self.sym = sym

    def _key(self):
        return ("c", self.sym)


class Var(Term):
    __slots__ = ("sym",)

    def __init__(self, sym: Sym):
        super().__init__()
        self.sym = sym

    def _key(self):
        return ("v", self.sym)


class BVar(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        super().__init__()
        self.index = index

    def _key(self):
        return ("b", self.index)


class App(Term):
    __slots__ = ("head", "args")

    def __init__(self, head: Term, args: Sequence[Term]):
        super().__init__()
        self.head = head
        self.args = tuple(args)

    def _key(self):
        return ("@", self.head, self.args)


class Abs(Term):
    __slots__ = ("ty", "body")

    def __init__(self, ty: SimpleType, body: Term):
        super().__init__()
        self.ty = ty
        self.body = body

    def _key(self):
        return ("l", self.ty, self.body)


def const(sym: Sym) -> Const:
    return Const(sym)


def var(sym: Sym) -> Var:
    return Var(sym)


TRUE = Const(TOP)
FALSE = Const(BOT)


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    if isinstance(t, App):
        return t.head, t.args
    return t, ()


def head_sym(t: Term) -> Sym | None:
    h, _ = spine(t)
    if isinstance(h, (Const, Var)):
        return h.sym
    return None


# ---------------------------------------------------------------------------
# de Bruijn plumbing


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0:
        return t
    if isinstance(t, BVar):
        if t.index >= cutoff:
            if t.index + d < 0:
                raise UnboundIndex(f"index {t.index} escapes its binder")
            return BVar(t.index + d)
        return t
    if isinstance(t, App):
        return App(shift(t.head, d, cutoff), [shift(a, d, cutoff) for a in t.args])
    if isinstance(t, Abs):
        return Abs(t.ty, shift(t.body, d, cutoff + 1))
    return t


def _subst(t: Term, j: int, s: Term) -> Term:
    # replace BVar(j) by s; s is already shifted for depth j
    if isinstance(t, BVar):
        return s if t.index == j else t
    if isinstance(t, App):
        return App(_subst(t.head, j, s), [_subst(a, j, s) for a in t.args])
    if isinstance(t, Abs):
        return Abs(t.ty, _subst(t.body, j + 1, shift(s, 1)))
    return t


def _beta(body: Term, arg: Term) -> Term:
    return shift(_subst(body, 0, shift(arg, 1)), -1)


def _has_loose(t: Term, j: int) -> bool:
    if isinstance(t, BVar):
        return t.index == j
    if isinstance(t, App):
        return _has_loose(t.head, j) or any(_has_loose(a, j) for a in t.args)
    if isinstance(t, Abs):
        return _has_loose(t.body, j + 1)
    return False


def loose_bvars(t: Term, depth: int = 0) -> set[int]:
    """Indices of bound variables free in t, relative to depth 0."""
    if isinstance(t, BVar):
        return {t.index - depth} if t.index >= depth else set()
    if isinstance(t, App):
        out = loose_bvars(t.head, depth)
        for a in t.args:
            out |= loose_bvars(a, depth)
        return out
    if isinstance(t, Abs):
        return loose_bvars(t.body, depth + 1)
    return set()


def _eta(ty: SimpleType, body: Term) -> Term:
    if isinstance(body, App) and body.args:
        last = body.args[-1]
        if isinstance(last, BVar) and last.index == 0:
            rest = body.args[:-1]
            if not _has_loose(body.head, 0) and not any(_has_loose(a, 0) for a in rest):
                h = shift(body.head, -1)
                if not rest:
                    return h
                return App(h, [shift(a, -1) for a in rest])
    return Abs(ty, body)


def normalize(t: Term) -> Term:
    """Beta-normal, eta-contracted form of a raw term."""
    if isinstance(t, (Const, Var, BVar)):
        return t
    if isinstance(t, Abs):
        return _eta(t.ty, normalize(t.body))
    if isinstance(t, App):
        args = [normalize(a) for a in t.args]
        h = normalize(t.head)
        while args:
            if isinstance(h, Abs):
                h = normalize(_beta(h.body, args[0]))
                args = args[1:]
            elif isinstance(h, App):
                args = list(h.args) + args
                h = h.head
            else:
                return App(h, args)
        return h
    raise TermError(f"not a term: {t!r}")


def apply(f: Term, *args: Term) -> Term:
    """Normal form of f applied to args."""
    if not args:
        return f
    return normalize(App(f, args))


def abstract(t: Term, sym: Sym) -> Term:
    """lambda x. t where the free variable or constant sym becomes the binder."""

    def go(u: Term, depth: int) -> Term:
        if isinstance(u, (Var, Const)) and u.sym == sym:
            return BVar(depth)
        if isinstance(u, BVar):
            return BVar(u.index + 1) if u.index >= depth else u
        if isinstance(u, App):
            return App(go(u.head, depth), [go(a, depth) for a in u.args])
        if isinstance(u, Abs):
            return Abs(u.ty, go(u.body, depth + 1))
        return u

    return normalize(Abs(sym.type, go(t, 0)))


def open_body(quant_arg: Term, arg: Term) -> Term:
    """Instance body[arg/x] of a quantifier argument (lambda x. body)."""
    return apply(quant_arg, arg)


def binder_type(quant_arg: Term) -> SimpleType:
    if isinstance(quant_arg, Abs):
        return quant_arg.ty
    h, args = spine(quant_arg)
    if isinstance(h, (Const, Var)) and h.sym.type is not None:
        # read off the head so loose bound variables in the arguments do no harm
        ty = h.sym.type
        for _ in args:
            ty = ty.cod if isinstance(ty, Arrow) else ty
    else:
        ty = type_of(quant_arg)
    if not isinstance(ty, Arrow):
        raise TypeMismatch(f"quantifier over non-function {quant_arg!r}")
    return ty.dom


def size(t: Term) -> int:
    if isinstance(t, App):
        return size(t.head) + sum(size(a) for a in t.args)
    if isinstance(t, Abs):
        return size(t.body)
    return 1


# ---------------------------------------------------------------------------
# symbols occurring in terms


def free_vars(t: Term) -> frozenset[Sym]:
    fv = t._fv
    if fv is None:
        if isinstance(t, Var):
            fv = frozenset((t.sym,))
        elif isinstance(t, App):
            fv = free_vars(t.head).union(*(free_vars(a) for a in t.args))
        elif isinstance(t, Abs):
            fv = free_vars(t.body)
        else:
            fv = frozenset()
        t._fv = fv
    return fv


def constants(t: Term) -> frozenset[Sym]:
    """Non-logical constants occurring in t."""
    cs = t._consts
    if cs is None:
        if isinstance(t, Const):
            cs = frozenset() if t.sym.kind == "logic" else frozenset((t.sym,))
        elif isinstance(t, App):
            cs = constants(t.head).union(*(constants(a) for a in t.args))
        elif isinstance(t, Abs):
            cs = constants(t.body)
        else:
            cs = frozenset()
        t._consts = cs
    return cs


def level(t: Term) -> int:
    lv = t._level
    if lv is None:
        lv = max((s.level for s in free_vars(t) | constants(t)), default=0)
        t._level = lv
    return lv


def replace_syms(t: Term, mapping: dict[Sym, Term]) -> Term:
    """Simultaneously replace constants and free variables, then normalize."""
    if not mapping:
        return t
    keys = set(mapping)
    if not (keys & (free_vars(t) | constants(t))):
        return t

    def go(u: Term, depth: int) -> Term:
        if isinstance(u, (Var, Const)):
            rep = mapping.get(u.sym)
            if rep is None:
                return u
            return shift(rep, depth) if depth else rep
        if isinstance(u, App):
            return App(go(u.head, depth), [go(a, depth) for a in u.args])
        if isinstance(u, Abs):
            return Abs(u.ty, go(u.body, depth + 1))
        return u

    return normalize(go(t, 0))


# ---------------------------------------------------------------------------
# formula builders


def conj(a: Term, b: Term) -> Term:
    return App(Const(AND), (a, b))


def disj(a: Term, b: Term) -> Term:
    return App(Const(OR), (a, b))


def imp(a: Term, b: Term) -> Term:
    return App(Const(IMP), (a, b))


def exists(x: Sym, body: Term) -> Term:
    return App(Const(SIGMA), (abstract(body, x),))


def forall(x: Sym, body: Term) -> Term:
    return App(Const(PI), (abstract(body, x),))


def logic_op(t: Term) -> Sym | None:
    """The logical constant heading a fully applied formula, if any."""
    h, args = spine(t)
    if isinstance(h, Const) and h.sym.kind == "logic" and len(args) == _ARITY[h.sym]:
        return h.sym
    return None


def is_atom(t: Term) -> bool:
    h, _ = spine(t)
    if isinstance(h, Const):
        return h.sym.kind != "logic"
    return isinstance(h, (Var, BVar))


def is_rigid(t: Term) -> bool:
    h, _ = spine(t)
    return isinstance(h, Const) and h.sym.kind != "logic"


def is_flex(t: Term) -> bool:
    return isinstance(spine(t)[0], Var)


# ---------------------------------------------------------------------------
# typing


def _head_type(h: Term, ctx: Sequence[SimpleType]) -> SimpleType:
    if isinstance(h, (Const, Var)):
        if h.sym.type is None:
            raise TypeMismatch(f"untyped symbol {h.sym}")
        return h.sym.type
    if isinstance(h, BVar):
        if h.index >= len(ctx):
            raise UnboundIndex(f"index {h.index} outside {len(ctx)} binders")
        return ctx[len(ctx) - 1 - h.index]
    raise TypeMismatch(f"bad head {h!r}")


def _atom_result(t: Term, ctx: Sequence[SimpleType]) -> SimpleType | None:
    """Result type of an atom after checking its arguments, else None."""
    h, args = spine(t)
    if isinstance(h, Const) and h.sym.kind == "logic":
        return None
    if isinstance(h, Abs):
        return None
    ty = _head_type(h, ctx)
    for a in args:
        if not isinstance(ty, Arrow):
            raise TypeMismatch(f"too many arguments for {h!r}")
        if not has_type(a, ty.dom, ctx):
            raise TypeMismatch(f"argument {a!r} of {h!r} is not of type {ty.dom}")
        ty = ty.cod
    return ty


def has_type(t: Term, ty: SimpleType, ctx: Sequence[SimpleType] = ()) -> bool:
    """Membership of a normal term in a type, subtypes included."""
    if isinstance(ty, Arrow):
        if isinstance(t, Abs):
            return subtype(ty.dom, t.ty) and has_type(t.body, ty.cod, (*ctx, t.ty))
        try:
            return subtype(type_of(t, ctx), ty)
        except TermError:
            return False
    if ty not in FORMULA_TYPES:
        try:
            return type_of(t, ctx) == ty
        except TermError:
            return False
    if isinstance(t, Abs):
        return False
    op = logic_op(t)
    if op is None:
        try:
            res = _atom_result(t, ctx)
        except TermError:
            return False
        if res is None or isinstance(res, Arrow):
            return False
        h = spine(t)[0]
        if ty == O:
            return res in FORMULA_TYPES
        if isinstance(h, Const):
            if ty == R or ty == P:
                return res == R
            return res in (R, A) and ty in (A, H, G)
        # variables of atom type only
        return res == A and ty in (A, H, G)
    args = spine(t)[1]
    if op is TOP:
        return ty in (H, G, O)
    if op is BOT:
        return ty == O
    if op is AND:
        return ty in (H, P, G, O) and all(has_type(x, ty, ctx) for x in args)
    if op is OR:
        return ty in (H, G, O) and all(has_type(x, ty, ctx) for x in args)
    if op is IMP:
        a, b = args
        if ty == G:
            return has_type(a, P, ctx) and has_type(b, G, ctx)
        if ty == P:
            return has_type(a, G, ctx) and has_type(b, R, ctx)
        if ty == O:
            return has_type(a, O, ctx) and has_type(b, O, ctx)
        return False
    body = args[0]
    if op is SIGMA and ty not in (H, G, O):
        return False
    if op is PI and ty not in (P, G, O):
        return False
    try:
        bt = binder_type_ctx(body, ctx)
    except TermError:
        return False
    return has_type(body, Arrow(bt, ty), ctx)


def binder_type_ctx(quant_arg: Term, ctx: Sequence[SimpleType]) -> SimpleType:
    if isinstance(quant_arg, Abs):
        return quant_arg.ty
    ty = type_of(quant_arg, ctx)
    if not isinstance(ty, Arrow):
        raise TypeMismatch(f"quantifier over non-function {quant_arg!r}")
    return ty.dom


_ORDER = (R, A, H, P, G, O)


def type_of(t: Term, ctx: Sequence[SimpleType] = ()) -> SimpleType:
    """Least type of t in the order r, a, h, p, g, o (or its unique type)."""
    if isinstance(t, Abs):
        return Arrow(t.ty, type_of(t.body, (*ctx, t.ty)))
    h, args = spine(t)
    if isinstance(h, Const) and h.sym.kind == "logic":
        n = _ARITY[h.sym]
        if len(args) > n:
            raise TypeMismatch(f"too many arguments for {h.sym}")
        if len(args) < n:
            # partially applied connective, as produced by eta-contraction
            return _partial_type(h.sym, args, ctx)
        for ty in _ORDER:
            if has_type(t, ty, ctx):
                return ty
        raise TypeMismatch(f"ill-formed formula {t!r}")
    res = _atom_result(t, ctx)
    if res is None:
        raise TypeMismatch(f"ill-typed term {t!r}")
    return res


def _partial_type(op: Sym, args, ctx) -> SimpleType:
    if op in (AND, OR):
        cands = (H, P, G, O) if op is AND else (H, G, O)
        for ty in cands:
            if all(has_type(a, ty, ctx) for a in args):
                return arrow(*([ty] * (2 - len(args))), ty)
    if op is IMP:
        if not args:
            return arrow(P, G, G)
        if has_type(args[0], P, ctx):
            return Arrow(G, G)
        if has_type(args[0], G, ctx):
            return Arrow(R, P)
        return Arrow(O, O)
    raise TypeMismatch(f"cannot type partially applied {op}")


def check(t: Term, ctx: Sequence[SimpleType] = ()) -> SimpleType:
    """Type-check a raw term and return the type of its normal form."""
    n = normalize(t)
    return type_of(n, ctx)


def coerce(t: Term, target: SimpleType) -> Term:
    """Inclusion of t into a supertype.  The term itself is unchanged."""
    if not has_type(t, target):
        raise NotASubtype(f"{t!r} is not of type {target}")
    return t


# ---------------------------------------------------------------------------
# classification


class FormulaClass(enum.Flag):
    OTHER = 0
    RIGID_ATOM = enum.auto()
    FLEX_ATOM = enum.auto()
    GOAL = enum.auto()
    PROGRAM = enum.auto()
    POSITIVE = enum.auto()


def is_goal(t: Term) -> bool:
    return has_type(t, G)


def is_program(t: Term) -> bool:
    return has_type(t, P)


def is_positive(t: Term, ctx: Sequence[SimpleType] = ()) -> bool:
    """No false, implication or universal quantifier anywhere in t."""
    if isinstance(t, Const):
        return t.sym not in (BOT, IMP, PI)
    if isinstance(t, App):
        return is_positive(t.head, ctx) and all(is_positive(a, ctx) for a in t.args)
    if isinstance(t, Abs):
        return is_positive(t.body, ctx)
    return True


def classify(t: Term) -> FormulaClass:
    out = FormulaClass.OTHER
    if logic_op(t) is None and not isinstance(t, Abs):
        try:
            res = _atom_result(t, ())
        except TermError:
            res = None
        if res in (R, A):
            if isinstance(spine(t)[0], Const):
                out |= FormulaClass.RIGID_ATOM
            elif isinstance(spine(t)[0], Var):
                out |= FormulaClass.FLEX_ATOM
    if is_goal(t):
        out |= FormulaClass.GOAL
    if is_program(t):
        out |= FormulaClass.PROGRAM
    if has_type(t, O) and is_positive(t):
        out |= FormulaClass.POSITIVE
    return out


# ---------------------------------------------------------------------------
# traversal helpers


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        yield from subterms(t.head)
        for a in t.args:
            yield from subterms(a)
    elif isinstance(t, Abs):
        yield from subterms(t.body)


def eta_expand_quant(arg: Term) -> Abs:
    """A quantifier argument presented as an explicit abstraction."""
    if isinstance(arg, Abs):
        return arg
    h, args = spine(shift(arg, 1))
    return Abs(binder_type(arg), App(h, (*args, BVar(0))))


# ---------------------------------------------------------------------------
# debug printing (the concrete syntax printer lives in uctt.syntax)


def show(t: Term, names: tuple[str, ...] = ()) -> str:
    op = logic_op(t)
    if op is not None:
        args = spine(t)[1]
        if op in (TOP, BOT):
            return op.name
        if op in (SIGMA, PI):
            lam = eta_expand_quant(args[0])
            x = f"x{len(names)}"
            return f"({op.name} {x}\\ {show(lam.body, (*names, x))})"
        return f"({show(args[0], names)} {op.name} {show(args[1], names)})"
    if isinstance(t, (Const, Var)):
        return t.sym.name
    if isinstance(t, BVar):
        k = len(names) - 1 - t.index
        return names[k] if 0 <= k < len(names) else f"#{t.index}"
    if isinstance(t, Abs):
        x = f"x{len(names)}"
        return f"({x}\\ {show(t.body, (*names, x))})"
    if isinstance(t, App):
        parts = [show(t.head, names)] + [_arg(a, names) for a in t.args]
        return " ".join(parts)
    return "?"


def _arg(a: Term, names) -> str:
    s = show(a, names)
    if isinstance(a, App) and logic_op(a) is None:
        return f"({s})"
    return s
