"""Counterstrategy feedback: sink-transition safety checks, trap-component
liveness checks, and deterministic natural-language rendering.

Counterstrategy labels are complete assignments, so every satisfaction
check is a direct transition evaluation; no satisfiability solving is
involved (see docs/design_notes.md for the equivalence argument).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .logic import Formula, GR1Spec, eval_transition, print_formula
from .skill_dsl import SyntaxFinding
from .synthesis import Counterstrategy


@dataclass(frozen=True)
class Feedback:
    kind: str          # "syntax" | "safety" | "liveness"
    rendered: str
    payload: tuple = ()

    @staticmethod
    def syntax(finding: SyntaxFinding) -> "Feedback":
        return Feedback(kind="syntax", rendered=finding.message,
                        payload=(finding,))


def _goal_text(formula: Formula) -> str:
    return f"( {print_formula(formula)} )"


def _skill_set_text(names: Sequence[str]) -> str:
    if len(names) == 1:
        return names[0]
    return "skills in {" + ", ".join(names) + "}"


def _verb(names: Sequence[str]) -> str:
    return "violates" if len(names) == 1 else "violate"


def safety_analysis(cs: Counterstrategy, spec: GR1Spec) -> list[Feedback]:
    """One finding per sink transition and violated sys-safety conjunct."""
    out: list[Feedback] = []
    seen: set[str] = set()
    for node in cs.nodes:
        for tid in node.transitions:
            succ = cs.nodes[tid]
            if not succ.is_sink:
                continue
            for psi in spec.sys_safety:
                if eval_transition(psi, node.state, succ.state):
                    continue
                names = sorted(cs.output_label(node.id).true_set)
                line = (
                    f"{_skill_set_text(names)} {_verb(names)} the hard "
                    f"constraints {print_formula(psi)}."
                )
                if line not in seen:
                    seen.add(line)
                    out.append(
                        Feedback(kind="safety", rendered=line,
                                 payload=(tuple(names), print_formula(psi)))
                    )
    return out


def strongly_connected_components(cs: Counterstrategy) -> list[list[int]]:
    """Tarjan over the successor graph, in reverse topological order."""
    edges = {node.id: list(node.transitions) for node in cs.nodes}
    return tarjan(list(edges), edges)


def tarjan(vertices: Sequence[int], edges) -> list[list[int]]:
    """Iterative Tarjan; components emitted callees-first."""
    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in vertices:
        if root in index_of:
            continue
        work = [(root, iter(edges[root]))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index_of:
                    index_of[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges[w])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
    return components


def _goal_interval(n: int, g1: int, g2: int) -> set[int]:
    """{i : g1 <= i < g2} cyclically over 1..n (wraps when g1 > g2)."""
    if g1 <= g2:
        return set(range(g1, g2))
    return set(range(g1, n + 1)) | set(range(1, g2))


def liveness_analysis(cs: Counterstrategy, spec: GR1Spec) -> list[Feedback]:
    """One finding per sinking, non-trivial strongly connected component."""
    n = len(spec.sys_liveness)
    members: dict[int, int] = {}
    components = strongly_connected_components(cs)
    for cid, comp in enumerate(components):
        for v in comp:
            members[v] = cid

    out: list[Feedback] = []
    seen: set[str] = set()
    ordered = sorted(components, key=lambda comp: min(comp))
    for comp in ordered:
        comp_set = set(comp)
        has_edge = False
        sinking = True
        for v in comp:
            for w in cs.nodes[v].transitions:
                has_edge = True
                if w not in comp_set:
                    sinking = False
                    break
            if not sinking:
                break
        if not sinking or not has_edge:
            continue
        satisfied: set[int] = set()
        for v in comp:
            for w in cs.nodes[v].transitions:
                if w in comp_set:
                    satisfied |= _goal_interval(
                        n, cs.goal_index(v), cs.goal_index(w)
                    )
        pursued = {cs.goal_index(v) for v in comp}
        unsatisfiable = pursued - satisfied
        if not unsatisfiable:
            continue
        blocked = ", ".join(
            _goal_text(spec.sys_liveness[i - 1]) for i in sorted(unsatisfiable)
        )
        if satisfied:
            after = ", ".join(
                _goal_text(spec.sys_liveness[i - 1]) for i in sorted(satisfied)
            )
            line = (
                f"The new skills cannot satisfy liveness goals {blocked} "
                f"after satisfying liveness goals {after}."
            )
        else:
            line = f"The new skills cannot satisfy liveness goals {blocked}."
        if line not in seen:
            seen.add(line)
            out.append(
                Feedback(
                    kind="liveness", rendered=line,
                    payload=(tuple(sorted(unsatisfiable)),
                             tuple(sorted(satisfied))),
                )
            )
    return out


_KIND_ORDER = {"syntax": 0, "safety": 1, "liveness": 2}


def render_feedback(items: Sequence[Feedback]) -> str:
    """Deterministic text: syntax, then safety, then liveness; one line each."""
    ordered = sorted(
        enumerate(items), key=lambda pair: (_KIND_ORDER[pair[1].kind], pair[0])
    )
    lines = []
    seen = set()
    for _, item in ordered:
        if item.rendered in seen:
            continue
        seen.add(item.rendered)
        lines.append(item.rendered)
    return "\n".join(lines)
