"""Seeded random specification generator for differential testing."""
from __future__ import annotations

import random

from gr1repair.logic import (
    CONTROLLABLE,
    FALSE,
    TRUE,
    UNCONTROLLABLE,
    OUTPUT,
    And,
    Atom,
    GR1Spec,
    Implies,
    Not,
    Or,
    Proposition,
)


def random_formula(rng: random.Random, names, primed_names=(), depth=2):
    if depth == 0 or rng.random() < 0.35:
        roll = rng.random()
        if roll < 0.08:
            return TRUE
        if roll < 0.12:
            return FALSE
        if primed_names and rng.random() < 0.45:
            return Atom(rng.choice(list(primed_names)), primed=True)
        return Atom(rng.choice(list(names)))
    op = rng.choice(["not", "and", "or", "implies"])
    if op == "not":
        return Not(random_formula(rng, names, primed_names, depth - 1))
    left = random_formula(rng, names, primed_names, depth - 1)
    right = random_formula(rng, names, primed_names, depth - 1)
    return {"and": And, "or": Or, "implies": Implies}[op](left, right)


def random_spec(rng: random.Random, max_props: int = 6, max_goals: int = 3) -> GR1Spec:
    n_inputs = rng.randint(1, min(4, max_props - 1))
    n_outputs = rng.randint(1, min(2, max_props - n_inputs))
    props = []
    for k in range(n_inputs):
        kind = CONTROLLABLE if rng.random() < 0.4 else UNCONTROLLABLE
        props.append(Proposition(f"i{k}", kind))
    for k in range(n_outputs):
        props.append(Proposition(f"o{k}", OUTPUT))
    inputs = [p.name for p in props if p.is_input]
    outputs = [p.name for p in props if p.kind == OUTPUT]
    names = inputs + outputs

    env_safety = tuple(
        random_formula(rng, names, primed_names=inputs)
        for _ in range(rng.randint(0, 2))
    )
    sys_safety = tuple(
        random_formula(rng, names, primed_names=names)
        for _ in range(rng.randint(0, 2))
    )
    env_liveness = tuple(
        random_formula(rng, names, depth=1) for _ in range(rng.randint(0, 2))
    )
    sys_liveness = tuple(
        random_formula(rng, names, depth=1)
        for _ in range(rng.randint(1, max_goals))
    )
    env_init = random_formula(rng, inputs, depth=1) if rng.random() < 0.7 else TRUE
    sys_init = random_formula(rng, names, depth=1) if rng.random() < 0.5 else TRUE
    return GR1Spec(
        propositions=tuple(props),
        env_init=env_init,
        env_safety=env_safety,
        env_liveness=env_liveness,
        sys_init=sys_init,
        sys_safety=sys_safety,
        sys_liveness=sys_liveness,
    )
