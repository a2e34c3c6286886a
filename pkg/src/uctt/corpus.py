"""Random level-0 program/goal pairs over a two-constant signature.

Pairs are produced as concrete syntax and parsed, so every pair doubles as
a parser test.  ``CORPUS_HEADER`` declares the signature shared by all
pairs: individuals ``a`` and ``b``, propositions ``p`` and ``q``, a unary
predicate ``r`` and a binary predicate ``s``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from uctt.elaborate import Program
from uctt.syntax import parse
from uctt.terms import Term, size

CORPUS_HEADER = """type a, b i.
type p, q o.
type r i -> o.
type s i -> i -> o.
"""

_VARS = "xyzuvw"


@dataclass(frozen=True)
class Pair:
    clauses: tuple[str, ...]
    goal: str

    def source(self) -> str:
        body = "".join(f"{c}.\n" for c in self.clauses)
        return f"{CORPUS_HEADER}{body}?- {self.goal}.\n"

    def load(self):
        """(signature, Program, goal term)"""
        src = parse(self.source())
        return src.signature, Program(src.clauses), src.queries[0]


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def ind(self, scope):
        if scope and self.rng.random() < 0.6:
            return self.rng.choice(scope)
        return self.rng.choice(["a", "b"])

    def atom(self, scope):
        k = self.rng.randrange(4)
        if k == 0:
            return "p"
        if k == 1:
            return "q"
        if k == 2:
            return f"r {self.ind(scope)}"
        return f"s {self.ind(scope)} {self.ind(scope)}"

    def goal(self, depth, scope):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.3:
            return "true" if rng.random() < 0.08 else self.atom(scope)
        k = rng.randrange(6)
        if k == 0:
            return f"({self.goal(depth - 1, scope)} , {self.goal(depth - 1, scope)})"
        if k == 1:
            return f"({self.goal(depth - 1, scope)} ; {self.goal(depth - 1, scope)})"
        if k == 2:
            return f"({self.prog(depth - 1, scope)} => {self.goal(depth - 1, scope)})"
        x = _VARS[len(scope)] if len(scope) < len(_VARS) else None
        if x is None:
            return self.atom(scope)
        q = "sigma" if k in (3, 5) else "pi"
        return f"({q} {x}:i\\ {self.goal(depth - 1, (*scope, x))})"

    def prog(self, depth, scope):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.35:
            return self.atom(scope)
        k = rng.randrange(4)
        if k in (0, 1):
            return f"({self.atom(scope)} :- {self.goal(depth - 1, scope)})"
        if k == 2:
            return f"({self.prog(depth - 1, scope)} , {self.prog(depth - 1, scope)})"
        x = _VARS[len(scope)] if len(scope) < len(_VARS) else None
        if x is None:
            return self.atom(scope)
        return f"(pi {x}:i\\ {self.prog(depth - 1, (*scope, x))})"


def _goal_size(g: Term) -> int:
    return size(g)


def generate(n: int, seed: int = 0, max_clauses: int = 3, max_goal_size: int = 8) -> list[Pair]:
    """n distinct pairs with at most max_clauses clauses and goal size at most max_goal_size."""
    rng = random.Random(seed)
    gen = _Gen(rng)
    out: list[Pair] = []
    seen = set()
    while len(out) < n:
        clauses = tuple(gen.prog(3, ()) for _ in range(rng.randint(0, max_clauses)))
        goal = gen.goal(3, ())
        pair = Pair(clauses, goal)
        if pair in seen:
            continue
        _, _, g = pair.load()
        if _goal_size(g) > max_goal_size:
            continue
        seen.add(pair)
        out.append(pair)
    return out


__all__ = ["CORPUS_HEADER", "Pair", "generate"]
