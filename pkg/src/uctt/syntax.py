"""Concrete syntax: a small lambda-Prolog dialect.

    module ntf.                     % ignored header
    kind item type.                 % base type
    type q item -> item -> o.       % constant; `@ 1` after the type sets a level
    p :- q, r.                      % clause, sugar for (q , r) => p
    pi x\\ q x x.                    % explicit quantifier
    ?- sigma y\\ q y a.              % query

Operators from loosest to tightest: ``:-``, ``;``, ``,`` (or ``&``), ``=>``,
application.  ``;``, ``,`` and ``=>`` associate to the right.  ``pi x\\``,
``sigma x\\`` and the lambda ``x\\`` extend as far right as possible; a bound
name may carry a type, as in ``pi x:item\\``.  Names starting with an upper
case letter or ``_`` are logic variables: in clauses they are universally
quantified around the clause, in queries they are free.

Declared ``o`` becomes ``r`` in result position and ``h`` in argument
position, so ``type f o -> o`` gives f the type h -> r.  Variables of
formula type become atoms (``a``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from uctt.binding import Signature
from uctt.terms import (
    _ARITY, AND, BOT, IMP, OR, PI, SIGMA, TOP, TRUE, A, Abs, App, Arrow, BaseType, BVar, Const, IOTA,
    G, H, O, P, R, SimpleType, Sym, Term, Var, abstract, eta_expand_quant, has_type, logic_op,
    normalize, shift, spine, type_of,
)


class SyntaxError_(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line, self.col = line, col


class UctSyntaxError(SyntaxError_):
    pass


class UctTypeError(SyntaxError_):
    pass


class UnknownSymbol(SyntaxError_):
    pass


# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<punct>:-|\?-|=>|->|[,;&\\().:@])
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_'#]*)
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out, pos, line, lstart = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UctSyntaxError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Tok(kind, s, line, pos - lstart + 1))
        for k, ch in enumerate(s):
            if ch == "\n":
                line += 1
                lstart = pos + k + 1
        pos = m.end()
    out.append(Tok("eof", "", line, pos - lstart + 1))
    return out


# ---------------------------------------------------------------------------
# raw syntax trees


@dataclass
class Node:
    kind: str  # name | app | op | bind | true
    text: str = ""
    kids: list = field(default_factory=list)
    ann: object = None  # binder type annotation
    line: int = 0
    col: int = 0


_INFIX = {":-": (0, "xfx"), ";": (1, "xfy"), ",": (2, "xfy"), "&": (2, "xfy"), "=>": (3, "xfy")}


class _Parser:
    def __init__(self, toks: list[Tok], kinds: dict):
        self.toks = toks
        self.pos = 0
        self.kinds = kinds

    @property
    def tok(self) -> Tok:
        return self.toks[self.pos]

    def next(self) -> Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.tok
        if t.text != text:
            raise UctSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str):
        t = self.tok
        raise UctSyntaxError(msg, t.line, t.col)

    # formulas
    def formula(self, min_prec: int = 0) -> Node:
        left = self.unary()
        while self.tok.kind == "punct" and self.tok.text in _INFIX:
            prec, assoc = _INFIX[self.tok.text]
            if prec < min_prec:
                break
            op = self.next()
            right = self.formula(prec + 1 if assoc == "xfx" else prec)
            name = "," if op.text == "&" else op.text
            left = Node("op", name, [left, right], line=op.line, col=op.col)
            if assoc == "xfx" and self.tok.text == op.text:
                self.error(f"{op.text} does not associate")
        return left

    def binder_ahead(self) -> bool:
        t1 = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else None
        return self.tok.kind == "name" and t1 is not None and t1.text in ("\\", ":")

    def unary(self) -> Node:
        t = self.tok
        if t.kind == "name" and t.text in ("pi", "sigma"):
            nt = self.toks[self.pos + 1]
            nt2 = self.toks[self.pos + 2] if self.pos + 2 < len(self.toks) else None
            if nt.kind == "name" and nt2 is not None and nt2.text in ("\\", ":"):
                self.next()
                x, ann = self.binder_head()
                body = self.formula(0)
                return Node("bind", t.text, [body], ann=(x, ann), line=t.line, col=t.col)
        if self.binder_ahead():
            x, ann = self.binder_head()
            body = self.formula(0)
            return Node("bind", "lam", [body], ann=(x, ann), line=t.line, col=t.col)
        return self.application()

    def binder_head(self):
        x = self.next()
        ann = None
        if self.tok.text == ":":
            self.next()
            ann = self.type_expr(arg=True)
        self.expect("\\")
        return x.text, ann

    def application(self) -> Node:
        head = self.atom()
        args = []
        while self.starts_atom():
            if self.binder_ahead() or (self.tok.text in ("pi", "sigma") and self._quant_binder_ahead()):
                args.append(self.unary())
                break
            args.append(self.atom())
        if not args:
            return head
        return Node("app", "", [head] + args, line=head.line, col=head.col)

    def _quant_binder_ahead(self) -> bool:
        nt = self.toks[self.pos + 1]
        nt2 = self.toks[self.pos + 2] if self.pos + 2 < len(self.toks) else None
        return nt.kind == "name" and nt2 is not None and nt2.text in ("\\", ":")

    def starts_atom(self) -> bool:
        return self.tok.kind == "name" or self.tok.text == "("

    def atom(self) -> Node:
        t = self.tok
        if t.text == "(":
            self.next()
            n = self.formula(0)
            self.expect(")")
            return n
        if t.kind == "name":
            self.next()
            if t.text == "true":
                return Node("true", line=t.line, col=t.col)
            return Node("name", t.text, line=t.line, col=t.col)
        self.error(f"unexpected {t.text or 'end of input'!r}")

    # types
    def type_expr(self, arg: bool = False) -> SimpleType:
        left = self.type_atom()
        if self.tok.text == "->":
            self.next()
            return Arrow(left, self.type_expr(arg))
        return left

    def type_atom(self):
        t = self.tok
        if t.text == "(":
            self.next()
            ty = self.type_expr()
            self.expect(")")
            return ty
        if t.kind != "name":
            self.error("expected a type")
        self.next()
        if t.text == "o":
            return O
        if t.text == "i" and "i" not in self.kinds:
            return IOTA
        if t.text not in self.kinds:
            raise UnknownSymbol(f"unknown type {t.text}", t.line, t.col)
        return self.kinds[t.text]


# ---------------------------------------------------------------------------
# type inference over raw types, where o stands for every formula type


class TVar:
    _n = 0

    def __init__(self):
        TVar._n += 1
        self.n = TVar._n

    def __repr__(self):
        return f"?{self.n}"


class _Types:
    def __init__(self):
        self.sub: dict[TVar, object] = {}

    def find(self, t):
        while isinstance(t, TVar) and t in self.sub:
            t = self.sub[t]
        return t

    def resolve(self, t):
        t = self.find(t)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.dom), self.resolve(t.cod))
        return t

    def occurs(self, v, t) -> bool:
        t = self.find(t)
        if t is v:
            return True
        if isinstance(t, Arrow):
            return self.occurs(v, t.dom) or self.occurs(v, t.cod)
        return False

    def unify(self, a, b, node: Node):
        a, b = self.find(a), self.find(b)
        if a is b or (not isinstance(a, TVar) and a == b and not isinstance(a, Arrow)):
            return
        if isinstance(a, TVar):
            if self.occurs(a, b):
                raise UctTypeError("cyclic type", node.line, node.col)
            self.sub[a] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, node)
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, node)
            self.unify(a.cod, b.cod, node)
            return
        raise UctTypeError(f"type mismatch: {_raw(self.resolve(a))} vs {_raw(self.resolve(b))}",
                           node.line, node.col)


def _raw(t) -> str:
    if isinstance(t, Arrow):
        d = _raw(t.dom)
        if isinstance(t.dom, Arrow):
            d = f"({d})"
        return f"{d} -> {_raw(t.cod)}"
    return str(t)


def const_type(raw: SimpleType) -> SimpleType:
    """UCTT type of a constant from its declared type."""
    if isinstance(raw, Arrow):
        return Arrow(_arg_type(raw.dom), const_type(raw.cod))
    return R if raw == O else raw


def var_type(raw: SimpleType) -> SimpleType:
    """UCTT type of a variable: formula results become atoms."""
    if isinstance(raw, Arrow):
        return Arrow(_arg_type(raw.dom), var_type(raw.cod))
    return A if raw == O else raw


def _arg_type(raw: SimpleType) -> SimpleType:
    if isinstance(raw, Arrow):
        return Arrow(_arg_type(raw.dom), _arg_type(raw.cod))
    return H if raw == O else raw


def _raw_of(ty: SimpleType) -> SimpleType:
    if isinstance(ty, Arrow):
        return Arrow(_raw_of(ty.dom), _raw_of(ty.cod))
    return O if ty in (O, H, A, R, P, G) else ty


# ---------------------------------------------------------------------------
# source files


@dataclass
class SourceFile:
    signature: Signature
    clauses: list[Term] = field(default_factory=list)
    queries: list[Term] = field(default_factory=list)
    directives: list[tuple] = field(default_factory=list)
    kinds: dict = field(default_factory=dict)

    @property
    def program(self):
        from uctt.elaborate import Program

        return Program(self.clauses)


class _Builder:
    """Turns raw trees into typed normal terms."""

    def __init__(self, sig: Signature, raw: dict, clause: bool):
        self.sig = sig
        self.raw = raw
        self.clause = clause
        self.ty = _Types()
        self.free: dict[str, TVar] = {}
        self.free_order: list[str] = []

    def infer(self, n: Node, env: tuple) -> object:
        if n.kind == "true":
            return O
        if n.kind == "name":
            for name, tv in reversed(env):
                if name == n.text:
                    return tv
            if n.text in self.raw:
                return self.raw[n.text]
            if n.text in ("pi", "sigma"):
                tv = TVar()
                return Arrow(Arrow(tv, O), O)
            if n.text[0].isupper() or n.text[0] == "_":
                if n.text not in self.free:
                    self.free[n.text] = TVar()
                    self.free_order.append(n.text)
                return self.free[n.text]
            raise UnknownSymbol(f"unknown constant {n.text}", n.line, n.col)
        if n.kind == "app":
            f = self.infer(n.kids[0], env)
            for a in n.kids[1:]:
                at = self.infer(a, env)
                res = TVar()
                self.ty.unify(f, Arrow(at, res), a)
                f = res
            return f
        if n.kind == "op":
            for k in n.kids:
                self.ty.unify(self.infer(k, env), O, k)
            return O
        if n.kind == "bind":
            x, ann = n.ann
            tv = TVar()
            if ann is not None:
                self.ty.unify(tv, _raw_of(ann), n)
            bt = self.infer(n.kids[0], (*env, (x, tv)))
            n.ann = (x, ann, tv)
            if n.text == "lam":
                return Arrow(tv, bt)
            self.ty.unify(bt, O, n)
            return O
        raise UctSyntaxError(f"bad node {n.kind}", n.line, n.col)

    def concrete(self, tv, node: Node) -> SimpleType:
        t = self.ty.resolve(tv)
        if _has_tvar(t):
            raise UctTypeError("cannot infer the type of a bound or free variable", node.line, node.col)
        return t

    def build(self, n: Node, env: tuple) -> Term:
        if n.kind == "true":
            return TRUE
        if n.kind == "name":
            for name, sym in reversed(env):
                if name == n.text:
                    return Var(sym)
            if n.text in self.sig.consts:
                return Const(self.sig.consts[n.text])
            if n.text == "pi":
                return Const(PI)
            if n.text == "sigma":
                return Const(SIGMA)
            return Var(self.free_syms[n.text])
        if n.kind == "app":
            return App(self.build(n.kids[0], env), [self.build(a, env) for a in n.kids[1:]])
        if n.kind == "op":
            a, b = (self.build(k, env) for k in n.kids)
            if n.text == ",":
                return App(Const(AND), (a, b))
            if n.text == ";":
                return App(Const(OR), (a, b))
            if n.text == "=>":
                return App(Const(IMP), (a, b))
            if n.text == ":-":
                return App(Const(IMP), (b, a))
        if n.kind == "bind":
            x, _, tv = n.ann
            sym = Sym(f"{x}#bound{id(n)}", var_type(self.concrete(tv, n)), 0, "var")
            body = self.build(n.kids[0], (*env, (x, sym)))
            lam = abstract(body, sym)
            if n.text == "lam":
                return lam
            return App(Const(PI if n.text == "pi" else SIGMA), (lam,))
        raise UctSyntaxError(f"bad node {n.kind}", n.line, n.col)

    def term(self, n: Node, want: str, level: int = 0) -> Term:
        t = self.infer(n, ())
        self.ty.unify(t, O, n)
        self.free_syms = {}
        for name in self.free_order:
            ty = var_type(self.concrete(self.free[name], n))
            self.free_syms[name] = Sym(name, ty, level, "var")
        term = normalize(self.build(n, ()))
        if self.clause:
            for name in reversed(self.free_order):
                term = App(Const(PI), (abstract(term, self.free_syms[name]),))
            term = normalize(term)
        target = P if want == "program" else G
        if not has_type(term, target):
            raise UctTypeError(f"not a {want} formula: {print_term(term)}", n.line, n.col)
        return term


def _has_tvar(t) -> bool:
    if isinstance(t, TVar):
        return True
    if isinstance(t, Arrow):
        return _has_tvar(t.dom) or _has_tvar(t.cod)
    return False


def parse(text: str, signature: Signature | None = None) -> SourceFile:
    sig = signature or Signature()
    src = SourceFile(sig)
    kinds = {t.name: t for t in sig.types}
    raw = {name: _raw_of(s.type) for name, s in sig.consts.items()}
    toks = tokenize(text)
    p = _Parser(toks, kinds)
    while p.tok.kind != "eof":
        t = p.tok
        if t.text == "module" or t.text == "sig":
            p.next()
            name = p.next()
            p.expect(".")
            src.directives.append((t.text, name.text))
        elif t.text == "kind":
            p.next()
            names = [p.next().text]
            while p.tok.text == ",":
                p.next()
                names.append(p.next().text)
            p.expect("type")
            p.expect(".")
            for name in names:
                kinds[name] = BaseType(name)
                sig.types.add(kinds[name])
        elif t.text == "type" and p.toks[p.pos + 1].kind == "name":
            p.next()
            names = [p.next().text]
            while p.tok.text == ",":
                p.next()
                names.append(p.next().text)
            ty = p.type_expr()
            lvl = 0
            if p.tok.text == "@":
                p.next()
                lvl = int(p.next().text)
            p.expect(".")
            for name in names:
                if name in ("pi", "sigma", "true", "false"):
                    raise UctSyntaxError(f"{name} is a logical constant", t.line, t.col)
                raw[name] = ty
                sig.declare(name, const_type(ty), lvl)
        elif t.text == "?-":
            p.next()
            n = p.formula(1)
            p.expect(".")
            src.queries.append(_Builder(sig, raw, False).term(n, "goal"))
        else:
            n = p.formula(0)
            p.expect(".")
            src.clauses.append(_Builder(sig, raw, True).term(n, "program"))
    src.kinds = kinds
    return src


def parse_goal(text: str, signature: Signature) -> Term:
    raw = {name: _raw_of(s.type) for name, s in signature.consts.items()}
    kinds = {t.name: t for t in signature.types}
    p = _Parser(tokenize(text), kinds)
    n = p.formula(1)
    if p.tok.text == ".":
        p.next()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return _Builder(signature, raw, False).term(n, "goal")


parseGoal = parse_goal


def parse_clause(text: str, signature: Signature) -> Term:
    raw = {name: _raw_of(s.type) for name, s in signature.consts.items()}
    kinds = {t.name: t for t in signature.types}
    p = _Parser(tokenize(text), kinds)
    n = p.formula(0)
    if p.tok.text == ".":
        p.next()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return _Builder(signature, raw, True).term(n, "program")


def parse_term(text: str, signature: Signature, ty: SimpleType, level: int = 0) -> Term:
    """A closed or open term of type ty; free variables get the given level."""
    raw = {name: _raw_of(s.type) for name, s in signature.consts.items()}
    kinds = {t.name: t for t in signature.types}
    p = _Parser(tokenize(text), kinds)
    n = p.formula(1)
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    b = _Builder(signature, raw, False)
    b.ty.unify(b.infer(n, ()), _raw_of(ty), n)
    b.free_syms = {name: Sym(name, var_type(b.concrete(b.free[name], n)), level, "var")
                   for name in b.free_order}
    return normalize(b.build(n, ()))


parseTerm = parse_term


# ---------------------------------------------------------------------------
# printing

_PREC = {OR: 1, AND: 2, IMP: 3}


def print_term(t: Term, names: tuple = (), prec: int = 0) -> str:
    """Concrete syntax for a normal term; parse_goal inverts it on goals."""
    op = logic_op(t)
    if op is not None:
        args = spine(t)[1]
        if op is TOP:
            return "true"
        if op is BOT:
            return "false"
        if op in (PI, SIGMA):
            lam = eta_expand_quant(args[0])
            x = _fresh_name(names, lam)
            s = f"{op.name} {x}{_annot(lam)}\\ {print_term(lam.body, (*names, x), 0)}"
            return f"({s})" if prec > 0 else s
        p = _PREC[op]
        a = print_term(args[0], names, p + 1)
        b = print_term(args[1], names, p)
        sym = "," if op is AND else op.name
        s = f"{a} {sym} {b}" if op is not AND else f"{a}, {b}"
        return f"({s})" if prec > p else s
    h, args = spine(t)
    if isinstance(h, Const) and h.sym.kind == "logic" and len(args) < _ARITY[h.sym]:
        # eta-contracted connective: print its expansion
        ty = type_of(t)
        return print_term(Abs(ty.dom, App(h, (*(shift(a, 1) for a in args), BVar(0)))), names, prec)
    if isinstance(t, Abs):
        x = _fresh_name(names, t)
        s = f"{x}{_annot(t)}\\ {print_term(t.body, (*names, x), 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, (Const, Var)):
        return t.sym.name
    if isinstance(t, BVar):
        k = len(names) - 1 - t.index
        return names[k] if 0 <= k < len(names) else f"_{t.index}"
    if isinstance(t, App):
        parts = [print_term(t.head, names, 5)] + [print_term(a, names, 5) for a in t.args]
        s = " ".join(parts)
        return f"({s})" if prec >= 5 else s
    raise TypeError(f"cannot print {t!r}")


def _annot(lam: Abs) -> str:
    # a vacuous binder gives the type checker nothing to go on
    from uctt.terms import loose_bvars

    if 0 in loose_bvars(lam.body):
        return ""
    ty = _raw(_raw_of(lam.ty))
    return f":({ty})" if isinstance(lam.ty, Arrow) else f":{ty}"


def _fresh_name(names: tuple, t: Term) -> str:
    from uctt.terms import constants, free_vars

    taken = set(names) | {s.name for s in constants(t) | free_vars(t)}
    k = len(names)
    while f"x{k}" in taken:
        k += 1
    return f"x{k}"


def print_program(formulas) -> str:
    return "".join(print_term(d) + ".\n" for d in formulas)


def print_type(ty: SimpleType) -> str:
    return _raw(ty)


__all__ = [
    "parse", "parse_goal", "parseGoal", "parse_clause", "parse_term", "parseTerm", "print_term", "print_program",
    "SourceFile", "UctSyntaxError", "UctTypeError", "UnknownSymbol", "const_type", "var_type",
    "tokenize",
]
