"""Line-oriented trace output: ``step#  rule  pos  substitution  |vector|``."""

from __future__ import annotations

from uctt.engine.core import Derivation, Step
from uctt.syntax import print_term


def format_subst(theta) -> str:
    if not len(theta):
        return "{}"
    parts = sorted(f"{print_term(t, prec=5)}/{x.name}" for x, t in theta.items())
    return "{" + ", ".join(parts) + "}"


def format_vector(v) -> str:
    if not v:
        return "||"
    return "|" + " * ".join(f"[{s.index}] {print_term(s.goal)}" for s in v) + "|"


def rule_label(st: Step) -> str:
    if st.rule == "or":
        return f"or{st.side + 1}"
    return st.rule


def format_trace(d: Derivation) -> str:
    lines = [f"0  start  -  {{}}  {format_vector(d.initial)}"]
    for n, (st, v) in enumerate(d.steps, start=1):
        subst = st.subst
        if st.rule == "instance":
            label = f"instance {print_term(st.witness, prec=5)}"
        elif st.rule == "exists":
            label = f"exists {st.witness.sym.name}"
        elif st.rule == "generic":
            label = f"generic {st.const.name}"
        else:
            label = rule_label(st)
        lines.append(f"{n}  {label}  {st.pos}  {format_subst(subst)}  {format_vector(v)}")
    return "\n".join(lines)
