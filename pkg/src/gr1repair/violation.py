"""Observed assumption violations: detection, relaxation, repair composition.

A violation is the observed triplet (inputs, outputs, next inputs) that
falsifies at least one env-safety conjunct.  Relaxation widens each
falsified conjunct with the characteristic formula of the observed
transition: the full literal conjunction over current inputs and outputs
plus next-state input literals, so exactly the observed step is re-admitted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .abstraction import Abstraction, Skill, compile_skills
from .errors import NoViolation
from .logic import (
    Assignment,
    Atom,
    Formula,
    GR1Spec,
    Not,
    Or,
    conjoin,
    eval_transition,
)


@dataclass(frozen=True)
class Violation:
    sigma_x: Assignment
    sigma_y: Assignment
    sigma_x_next: Assignment

    def current(self) -> Assignment:
        return self.sigma_x | self.sigma_y

    def to_dict(self) -> dict:
        return {
            "inputs": self.sigma_x.sorted(),
            "outputs": self.sigma_y.sorted(),
            "next_inputs": self.sigma_x_next.sorted(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Violation":
        return cls(
            sigma_x=Assignment(data["inputs"]),
            sigma_y=Assignment(data["outputs"]),
            sigma_x_next=Assignment(data["next_inputs"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Violation":
        return cls.from_dict(json.loads(text))


def detect_violation(
    spec: GR1Spec,
    sigma_x: Assignment,
    sigma_y: Assignment,
    sigma_x_next: Assignment,
) -> list[int]:
    """Indices of env-safety conjuncts falsified by the observed transition."""
    current = sigma_x | sigma_y
    return [
        i
        for i, psi in enumerate(spec.env_safety)
        if not eval_transition(psi, current, sigma_x_next)
    ]


def characteristic_formula(spec: GR1Spec, v: Violation) -> Formula:
    """Full literal conjunction admitting exactly the observed transition."""
    literals = []
    current = v.current()
    for p in spec.propositions:
        atom = Atom(p.name)
        literals.append(atom if p.name in current else Not(atom))
    for p in spec.inputs:
        atom = Atom(p.name, primed=True)
        literals.append(atom if p.name in v.sigma_x_next else Not(atom))
    return conjoin(literals)


def relax_assumptions(spec: GR1Spec, v: Violation) -> GR1Spec:
    """Widen every falsified env-safety conjunct with the observed transition.

    Re-applying the same violation is a no-op: once the characteristic
    disjunct is present (detected structurally) the spec returns unchanged.
    """
    indices = detect_violation(spec, v.sigma_x, v.sigma_y, v.sigma_x_next)
    chi = characteristic_formula(spec, v)
    if not indices:
        if any(
            isinstance(psi, Or) and psi.right == chi for psi in spec.env_safety
        ):
            return spec
        raise NoViolation("transition satisfies every env-safety conjunct")
    env_safety = list(spec.env_safety)
    for i in indices:
        env_safety[i] = Or(env_safety[i], chi)
    return GR1Spec(
        propositions=spec.propositions,
        env_init=spec.env_init,
        env_safety=tuple(env_safety),
        env_liveness=spec.env_liveness,
        sys_init=spec.sys_init,
        sys_safety=spec.sys_safety,
        sys_liveness=spec.sys_liveness,
    )


def apply_repair(
    spec: GR1Spec,
    v: Violation,
    skills: Sequence[Skill],
    abstraction: Abstraction,
) -> GR1Spec:
    """Candidate spec: compile the new skills, then relax the violation.

    The order is fixed: relaxation runs last so the characteristic formula
    ranges over the already-extended output universe.
    """
    return relax_assumptions(compile_skills(abstraction, list(skills), spec), v)
