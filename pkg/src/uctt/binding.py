"""Signatures, fresh symbols, substitutions and constant replacers.

A symbol of level i lives in the universe U_i, which contains every
symbol of level i or less.  Fresh symbols come from one session-wide
counter, so a fresh name is never reused by any derivation.

A substitution maps logic variables to normal terms.  It is *legal*
when every binding preserves type, its term is positive and the term's
level does not exceed the variable's level; it is *safe* when no
variable of its domain occurs in its range, which is the same as being
idempotent.  Composition is diagrammatic: ``compose(s1, s2)`` sends x to
``s2(s1(x))``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from uctt.terms import (
    AND, OR, SIGMA, TRUE, A, Abs, App, Arrow, BVar, BaseType, Const, FORMULA_TYPES,
    G, H, R, SimpleType, Sym, Term, Var, arg_types, constants, free_vars, has_type,
    is_positive, level, normalize, replace_syms,
)


class BindingError(Exception):
    pass


class NotARenaming(BindingError):
    pass


class IllegalSubstitution(BindingError):
    pass


# ---------------------------------------------------------------------------
# fresh symbols

_counter = itertools.count(1)
_lock = threading.Lock()


def _next() -> int:
    with _lock:
        return next(_counter)


def fresh_var(level: int, ty: SimpleType, hint: str = "W") -> Sym:
    return Sym(f"{hint}#{_next()}", ty, level, "var")


def fresh_const(level: int, ty: SimpleType, hint: str = "c") -> Sym:
    return Sym(f"{hint}#{_next()}", ty, level, "const")


freshVar = fresh_var
freshConst = fresh_const


# ---------------------------------------------------------------------------
# signatures


@dataclass
class Signature:
    """Declared base types and constants."""

    types: set[BaseType] = field(default_factory=set)
    consts: dict[str, Sym] = field(default_factory=dict)

    def declare(self, name: str, ty: SimpleType, lvl: int = 0) -> Sym:
        if name in self.consts and self.consts[name].type != ty:
            raise BindingError(f"constant {name} redeclared with another type")
        s = Sym(name, ty, lvl, "const")
        self.consts[name] = s
        return s

    def universe(self, lvl: int, extra: Iterable[Sym] = ()) -> frozenset[Sym]:
        """Constants of U_lvl known here: declared ones plus extra occurrences."""
        return frozenset(s for s in itertools.chain(self.consts.values(), extra)
                         if s.level <= lvl and s.kind == "const")


# ---------------------------------------------------------------------------
# substitutions


def is_top_lambda(t: Term, ty: SimpleType) -> bool:
    """t is lambda u1..um. true and ty is a1 -> .. -> am -> a."""
    args, res = arg_types(ty)
    if res != A:
        return False
    for dom in args:
        if not isinstance(t, Abs) or t.ty != dom:
            return False
        t = t.body
    return t == TRUE


def binding_ok(x: Sym, t: Term) -> bool:
    """Type-preservation for a single binding, allowing the true-rule instance."""
    return has_type(t, x.type) or is_top_lambda(t, x.type)


class Substitution:
    """Finite map from logic variables to normal terms; trivial bindings dropped."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[Sym, Term] | Iterable[tuple[Sym, Term]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m = {}
        for x, t in items:
            if x.kind != "var":
                raise BindingError(f"cannot bind non-variable {x}")
            if isinstance(t, Var) and t.sym == x:
                continue
            m[x] = t
        self._map = m
        self._hash = None

    # mapping protocol
    def __getitem__(self, x: Sym) -> Term:
        return self._map[x]

    def get(self, x: Sym, default=None):
        return self._map.get(x, default)

    def __contains__(self, x: Sym) -> bool:
        return x in self._map

    def __iter__(self) -> Iterator[Sym]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def items(self):
        return self._map.items()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._map:
            return "{}"
        parts = sorted(f"{t!r}/{x.name}" for x, t in self._map.items())
        return "{" + ", ".join(parts) + "}"

    # structure
    @property
    def domain(self) -> frozenset[Sym]:
        return frozenset(self._map)

    @property
    def range_vars(self) -> frozenset[Sym]:
        return frozenset().union(*(free_vars(t) for t in self._map.values()))

    @property
    def range_consts(self) -> frozenset[Sym]:
        return frozenset().union(*(constants(t) for t in self._map.values()))

    @property
    def level(self) -> int:
        return max((level(t) for t in self._map.values()), default=0)

    def is_identity(self) -> bool:
        return not self._map

    def is_safe(self) -> bool:
        return not (self.domain & self.range_vars)

    def illegal_binding(self) -> tuple[Sym, Term, str] | None:
        for x, t in self._map.items():
            if not binding_ok(x, t):
                return x, t, "type"
            if not is_positive(t):
                return x, t, "positivity"
            if level(t) > x.level:
                return x, t, "level"
        return None

    def is_legal(self) -> bool:
        return self.illegal_binding() is None

    def __call__(self, t: Term) -> Term:
        return apply_subst(self, t)

    def restrict(self, xs: Iterable[Sym]) -> "Substitution":
        keep = set(xs)
        return Substitution((x, t) for x, t in self._map.items() if x in keep)


ID = Substitution()


def apply_subst(theta: Substitution, t: Term) -> Term:
    if not len(theta):
        return t
    return replace_syms(t, theta._map)


applySubst = apply_subst


def compose(theta1: Substitution, theta2: Substitution) -> Substitution:
    """x maps to theta2(theta1(x))."""
    out = {x: apply_subst(theta2, t) for x, t in theta1.items()}
    for x, t in theta2.items():
        if x not in theta1:
            out[x] = t
    return Substitution(out)


def compose_all(thetas: Iterable[Substitution]) -> Substitution:
    out = ID
    for th in thetas:
        out = compose(out, th)
    return out


def rename_subst(rho: Substitution, theta: Substitution) -> Substitution:
    """rho^-1 theta rho, computed as {t rho / x rho}."""
    check_renaming(rho)
    out = {}
    for x, t in theta.items():
        xr = apply_subst(rho, Var(x))
        out[xr.sym] = apply_subst(rho, t)
    return Substitution(out)


renameSubst = rename_subst


def check_renaming(rho: Substitution, neutral: bool = True) -> None:
    targets = []
    for x, t in rho.items():
        if not isinstance(t, Var):
            raise NotARenaming(f"{x} is mapped to a non-variable")
        if t.sym.type != x.type:
            raise NotARenaming(f"{x} and {t.sym} differ in type")
        if neutral and t.sym.level != x.level:
            raise NotARenaming(f"{x} and {t.sym} differ in level")
        targets.append(t.sym)
    if len(set(targets)) != len(targets) or set(targets) != set(rho.domain):
        raise NotARenaming("renaming is not a permutation of its support")


def swap_renaming(pairs: Iterable[tuple[Sym, Sym]]) -> Substitution:
    """The renaming exchanging each x with its partner y."""
    m = {}
    for x, y in pairs:
        m[x] = Var(y)
        m[y] = Var(x)
    return Substitution(m)


# ---------------------------------------------------------------------------
# constant replacers


class ConstantReplacer:
    """Type-preserving map from constants to constants, identity off a finite set."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[Sym, Sym] | Iterable[tuple[Sym, Sym]] = ()):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        m = {}
        for c, d in items:
            if c.kind != "const" or d.kind != "const":
                raise BindingError("constant replacers act on constants only")
            if c.type != d.type:
                raise BindingError(f"{c} and {d} differ in type")
            if c != d:
                m[c] = d
        self._map = m

    def __call__(self, c: Sym) -> Sym:
        return self._map.get(c, c)

    def items(self):
        return self._map.items()

    @property
    def domain(self) -> frozenset[Sym]:
        return frozenset(self._map)

    @property
    def range(self) -> frozenset[Sym]:
        return frozenset(self._map.values())

    @property
    def occurring(self) -> frozenset[Sym]:
        return self.domain | self.range

    def is_neutral(self) -> bool:
        return all(c.level == d.level for c, d in self._map.items())

    def is_renamer(self) -> bool:
        return set(self._map.values()) == set(self._map)

    def is_injective_on(self, cs: Iterable[Sym]) -> bool:
        images = [self(c) for c in cs]
        return len(images) == len(set(images))

    def extend(self, c: Sym, d: Sym) -> "ConstantReplacer":
        m = dict(self._map)
        m[c] = d
        return ConstantReplacer(m)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{c}->{d}" for c, d in self._map.items()) + "}"


def apply_replacer(xi: ConstantReplacer, t: Term) -> Term:
    if not xi._map:
        return t
    return replace_syms(t, {c: Const(d) for c, d in xi._map.items()})


applyReplacer = apply_replacer


def replace_in_subst(xi: ConstantReplacer, theta: Substitution) -> Substitution:
    """theta xi: x maps to xi applied to theta(x)."""
    return Substitution({x: apply_replacer(xi, t) for x, t in theta.items()})


# ---------------------------------------------------------------------------
# positive terms of a universe


def _fits(res: SimpleType, target: SimpleType, head_is_const: bool) -> bool:
    if target not in FORMULA_TYPES:
        return res == target
    if target == R:
        return head_is_const and res == R
    if target in (A, H, G):
        return res == R and head_is_const or res == A
    return False


def inhabitant(ty: BaseType) -> Sym:
    """Canonical level-0 constant used when a base type has no declared constant."""
    return Sym(f"_{ty.name}", ty, 0, "const")


class WitnessEnumerator:
    """Closed positive normal terms of a type over a finite pool of constants.

    Terms are produced by increasing size (number of symbol occurrences).
    ``terms(ty, n)`` returns those of size at most n together with a flag
    telling whether the list is exhaustive, i.e. no larger term exists.
    """

    def __init__(self, pool: Iterable[Sym]):
        self.pool = frozenset(s for s in pool if s.kind == "const")
        self._cache: dict = {}
        bases = set()
        for c in self.pool:
            args, res = arg_types(c.type)
            for t in (*args, res):
                if isinstance(t, BaseType) and t not in FORMULA_TYPES:
                    bases.add(t)
        self._sigma_types = sorted(bases, key=lambda b: b.name)

    def _with_inhabitants(self, ty: SimpleType) -> frozenset[Sym]:
        extra = set()
        for b in _base_types(ty):
            if b in FORMULA_TYPES:
                continue
            if not any(arg_types(c.type)[1] == b for c in self.pool):
                extra.add(inhabitant(b))
        return self.pool | extra

    def exact(self, ty: SimpleType, n: int, ctx: tuple = ()) -> list[Term]:
        key = (ty, n, ctx)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: dict[Term, None] = {}
        if n >= 1:
            if isinstance(ty, Arrow):
                for body in self.exact(ty.cod, n, (*ctx, ty.dom)):
                    out[normalize(Abs(ty.dom, body))] = None
            else:
                self._base(ty, n, ctx, out)
        res = list(out)
        self._cache[key] = res
        return res

    def _base(self, ty, n, ctx, out):
        pool = self._pool_for(ty)
        heads = [(Const(c), c.type, True) for c in sorted(pool, key=lambda s: s.name)]
        heads += [(BVar(len(ctx) - 1 - k), t, False) for k, t in enumerate(ctx)]
        for head, hty, is_const in heads:
            args, res = arg_types(hty)
            if isinstance(res, Arrow):
                continue
            if not _fits(res, ty, is_const):
                continue
            for argv in self._args(args, n - 1, ctx):
                out[App(head, argv) if argv else head] = None
        if ty == A and n == 1:
            out[TRUE] = None
        if ty in (H, G):
            if n == 1:
                out[TRUE] = None
            for op in (AND, OR):
                for k in range(1, n - 1):
                    for x in self.exact(H, k, ctx):
                        for y in self.exact(H, n - 1 - k, ctx):
                            out[App(Const(op), (x, y))] = None
            for b in self._sigma_types:
                for body in self.exact(H, n - 1, (*ctx, b)):
                    out[App(Const(SIGMA), (normalize(Abs(b, body)),))] = None

    def _pool_for(self, ty):
        if ty not in FORMULA_TYPES:
            p = self._with_inhabitants(ty)
            return p
        return self.pool

    def _args(self, tys, n, ctx):
        if not tys:
            if n == 0:
                yield ()
            return
        first, rest = tys[0], tys[1:]
        for k in range(1, n - len(rest) + 1):
            for x in self.exact(first, k, ctx):
                for xs in self._args(rest, n - k, ctx):
                    yield (x, *xs)

    def terms(self, ty: SimpleType, max_size: int) -> tuple[list[Term], bool]:
        key = ("upto", ty, max_size)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        seen: dict[Term, None] = {}
        for n in range(1, max_size + 1):
            for t in self.exact(ty, n):
                seen[t] = None
        complete = not self.exact(ty, max_size + 1) and not self.exact(ty, max_size + 2)
        res = (list(seen), complete)
        self._cache[key] = res
        return res


def _base_types(ty: SimpleType) -> set[BaseType]:
    if isinstance(ty, Arrow):
        return _base_types(ty.dom) | _base_types(ty.cod)
    return {ty}


_enum_cache: dict[frozenset, WitnessEnumerator] = {}


def witnesses(ty: SimpleType, pool: Iterable[Sym], max_size: int) -> tuple[list[Term], bool]:
    """Closed positive terms of type ty over pool, up to max_size."""
    key = frozenset(pool)
    en = _enum_cache.get(key)
    if en is None:
        if len(_enum_cache) > 4096:
            _enum_cache.clear()
        en = _enum_cache[key] = WitnessEnumerator(key)
    return en.terms(ty, max_size)


def symbols_of(terms: Iterable[Term]) -> frozenset[Sym]:
    out: set[Sym] = set()
    for t in terms:
        out |= constants(t)
    return frozenset(out)


def vars_of(terms: Iterable[Term]) -> frozenset[Sym]:
    out: set[Sym] = set()
    for t in terms:
        out |= free_vars(t)
    return frozenset(out)
