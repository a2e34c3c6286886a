"""Three-way agreement between resolution, the T operator and the sequent prover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from uctt.elaborate import Program
from uctt.engine.core import State
from uctt.engine.search import SearchConfig, id_success
from uctt.semantics import Bounds, Evaluator
from uctt.sequent import provable, sequent
from uctt.terms import Sym, Term

_SOLVE = {"success": "yes", "failure": "no", "exhausted": "unknown"}
_IFIX = {"top": "yes", "bot": "no", "unknown": "unknown"}


@dataclass(frozen=True)
class Verdicts:
    solve: str
    ifix: str
    prover: str
    fuel: int = 0

    @property
    def decided(self) -> bool:
        return "unknown" not in (self.solve, self.ifix, self.prover)

    @property
    def agree(self) -> bool:
        known = {v for v in (self.solve, self.ifix, self.prover) if v != "unknown"}
        return len(known) <= 1

    def __str__(self) -> str:
        return f"solve={self.solve} ifix={self.ifix} prover={self.prover}"


def three_way(prog: Program | Iterable[Term], goal: Term, index: int = 0, depth: int = 8,
              fuel: int = 8, witness_size: int = 4, signature: Iterable[Sym] = (),
              evaluator: Evaluator | None = None, system: str = "rest") -> Verdicts:
    prog = prog if isinstance(prog, Program) else Program(prog)
    signature = frozenset(signature)
    cfg = SearchConfig(system, depth, witness_size, 1, signature)
    s = _SOLVE[id_success(State(index, prog, goal), cfg).status]
    ev = evaluator or Evaluator(Bounds(witness_size, signature))
    r = ev.ifix_query(index, prog, goal, fuel)
    p = provable(sequent(prog.formulas, goal, index), depth, witness_size, signature)
    return Verdicts(s, _IFIX[r.status], p, r.fuel)


threeWay = three_way

__all__ = ["Verdicts", "three_way", "threeWay"]
