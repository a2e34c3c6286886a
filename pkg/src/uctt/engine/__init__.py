"""Resolution systems, derivation checking and derivation transformations."""

from uctt.engine.checker import CheckResult, Violation, check_derivation, checkDerivation
from uctt.engine.core import (
    Derivation, DepthExhausted, EngineError, HypothesisUnmet, IllegalSubstitution,
    LevelViolation, NoUnifier, RuleShapeMismatch, State, Step, apply_rule, applyRule,
    goal_state, initial, state, step_with, vector_subst,
)
from uctt.engine.lemmas import (
    avoid_consts, avoid_vars, generic_to_instance, instance_to_generic, instantiate,
    level_increase, level_reduce, product, rename_consts, rename_vars, replace_const_by_var,
    specialize, specialize_by, weaken_program,
)
from uctt.engine.plans import Plan, realize
from uctt.engine.search import Outcome, SearchConfig, id_success, search, solve
from uctt.engine.trace import format_trace

__all__ = [
    "CheckResult", "Violation", "check_derivation", "checkDerivation", "Derivation",
    "DepthExhausted", "EngineError", "HypothesisUnmet", "IllegalSubstitution",
    "LevelViolation", "NoUnifier", "RuleShapeMismatch", "State", "Step", "apply_rule",
    "applyRule", "goal_state", "initial", "state", "step_with", "vector_subst", "Outcome",
    "SearchConfig", "id_success", "search", "solve", "format_trace",
    "avoid_consts", "avoid_vars", "generic_to_instance", "instance_to_generic", "instantiate",
    "level_increase", "level_reduce", "product", "rename_consts", "rename_vars",
    "replace_const_by_var", "specialize", "specialize_by", "weaken_program", "Plan", "realize",
]
