"""Independent re-validation of derivations.

The checker trusts nothing recorded in a derivation except the steps
themselves.  It replays the fresh-symbol ledger, re-derives elab membership,
re-checks unifier equations by normalising both sides, and recomputes every
successor vector.  The first violation is reported with its step number
(1-based; 0 means the initial vector) and the name of the failed condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from uctt.engine.core import (
    Derivation, IllegalSubstitution, LevelViolation, NoUnifier, RuleShapeMismatch, Step,
    apply_rule, vector_consts, vector_vars,
)
from uctt.terms import constants, free_vars

CONDITIONS = (
    "RuleShapeMismatch", "LevelViolation", "FreshnessViolation", "ElabMembership",
    "UnifierMismatch", "IllegalSubstitution", "SuccessorMismatch", "TrueIdentity",
)


@dataclass(frozen=True)
class Violation:
    step: int
    condition: str
    message: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.condition}: {self.message}"


@dataclass(frozen=True)
class CheckResult:
    violation: Violation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else str(self.violation)


def _step_symbols(st: Step) -> set:
    out = set(st.subst.domain) | set(st.subst.range_vars) | set(st.subst.range_consts)
    if st.witness is not None:
        out |= free_vars(st.witness) | constants(st.witness)
    return out


def check_derivation(d: Derivation) -> CheckResult:
    v = d.initial
    for s in v:
        if s.level > s.index:
            return CheckResult(Violation(0, "LevelViolation",
                                         f"state of index {s.index} mentions level {s.level}"))
    used = set(vector_vars(v)) | set(vector_consts(v))
    for n, (st, recorded) in enumerate(d.steps, start=1):
        bad = _check_step(n, v, st, recorded, used)
        if bad is not None:
            return CheckResult(bad)
        used |= set(st.fresh_symbols()) | _step_symbols(st)
        used |= vector_vars(recorded) | vector_consts(recorded)
        v = recorded
    return CheckResult()


checkDerivation = check_derivation


def _check_step(n: int, v, st: Step, recorded, used: set) -> Violation | None:
    fresh = st.fresh_symbols()
    if len(set(fresh)) != len(fresh):
        return Violation(n, "FreshnessViolation", "a fresh symbol is introduced twice")
    for x in fresh:
        if x in used:
            return Violation(n, "FreshnessViolation", f"{x} occurred earlier in the derivation")
    if st.rule == "true" and not len(st.subst):
        return Violation(n, "TrueIdentity", "true with the identity substitution")
    if st.rule in ("backchain", "axiom") and 0 <= st.pos < len(v):
        if st.clause is None or st.clause not in v[st.pos].program.elab:
            return Violation(n, "ElabMembership", f"{st.clause!r} is not in elab of the program")
    try:
        nxt = apply_rule(v, st)
    except LevelViolation as e:
        return Violation(n, "LevelViolation", str(e))
    except IllegalSubstitution as e:
        return Violation(n, "IllegalSubstitution", str(e))
    except NoUnifier as e:
        return Violation(n, "UnifierMismatch", str(e))
    except RuleShapeMismatch as e:
        return Violation(n, "RuleShapeMismatch", str(e))
    if nxt != tuple(recorded):
        return Violation(n, "SuccessorMismatch", "recorded vector differs from the rule's result")
    for s in nxt:
        if s.level > s.index:
            return Violation(n, "LevelViolation", f"state of index {s.index} mentions level {s.level}")
    return None


def first_violation(d: Derivation) -> Violation | None:
    return check_derivation(d).violation
