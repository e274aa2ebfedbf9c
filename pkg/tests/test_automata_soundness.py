"""Exhaustive objective checks on extracted automata.

A strategy is sound iff no reachable cycle of the play graph satisfies
every env-liveness goal while missing some sys-liveness goal.  A
counterstrategy is sound iff every cycle both covers all env-liveness
goals and misses at least one sys-liveness goal (the system picks the
path, so a single good-for-the-system cycle disproves the automaton).
Cycle conditions reduce to strongly-connected-component checks.
"""
import random

from gr1repair.analysis import tarjan
from gr1repair.logic import eval_state, eval_transition
from gr1repair.synthesis import (
    check_realizability,
    extract_counterstrategy,
    extract_strategy,
)
from gr1repair.violation import apply_repair, relax_assumptions
from gr1repair.skill_dsl import parse_skills, typecheck_skills

from specgen import random_spec


def _components_with_edges(vertices, edges):
    for comp in tarjan(vertices, edges):
        comp_set = set(comp)
        if any(w in comp_set for v in comp for w in edges[v]):
            yield comp


def assert_strategy_objective(spec, strategy):
    edges = {n.id: sorted({t for _, t in n.transitions}) for n in strategy.nodes}
    states = {n.id: n.state for n in strategy.nodes}
    # every edge satisfies every guarantee
    for n in strategy.nodes:
        for _, t in n.transitions:
            for psi in spec.sys_safety:
                assert eval_transition(psi, states[n.id], states[t])
    # no trap: a cycle inside the complement of any one sys goal that still
    # satisfies every env goal would be a losing play
    for j, goal in enumerate(spec.sys_liveness):
        sub_vertices = [v for v in edges if not eval_state(goal, states[v])]
        keep = set(sub_vertices)
        sub_edges = {v: [w for w in edges[v] if w in keep] for v in sub_vertices}
        for comp in _components_with_edges(sub_vertices, sub_edges):
            for env_goal in spec.env_liveness:
                if not any(eval_state(env_goal, states[v]) for v in comp):
                    break
            else:
                raise AssertionError(
                    f"strategy trap: goal {j} avoidable while all "
                    f"assumptions recur in component {comp}"
                )


def assert_counterstrategy_objective(spec, cs):
    edges = {n.id: list(n.transitions) for n in cs.nodes}
    states = {n.id: n.state for n in cs.nodes}
    vertices = list(edges)
    # (a) no cycle may starve an env-liveness goal
    for i, env_goal in enumerate(spec.env_liveness):
        sub_vertices = [v for v in vertices if not eval_state(env_goal, states[v])]
        keep = set(sub_vertices)
        sub_edges = {v: [w for w in edges[v] if w in keep] for v in sub_vertices}
        trapped = list(_components_with_edges(sub_vertices, sub_edges))
        assert not trapped, (
            f"counterstrategy starves its own assumption {i} in {trapped[0]}"
        )
    # (b) no cycle may satisfy every sys-liveness goal
    for comp in _components_with_edges(vertices, edges):
        missing = [
            j for j, goal in enumerate(spec.sys_liveness)
            if not any(eval_state(goal, states[v]) for v in comp)
        ]
        assert missing, (
            f"component {comp} satisfies every system goal; the system "
            "could win by looping there"
        )


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def test_fixture_strategies_are_objective_sound(factory, mini_world, swarm_world):
    for world in (factory, mini_world, swarm_world):
        solution = check_realizability(world.full_spec)
        assert solution.realizable
        strategy = extract_strategy(world.full_spec, solution)
        assert_strategy_objective(world.full_spec, strategy)


def test_factory_counterstrategies_are_objective_sound(factory):
    v = factory.violation("cup")
    specs = [relax_assumptions(factory.full_spec, v)]
    for name in ("unsafe", "unlive"):
        skills = typecheck_skills(
            parse_skills(factory.candidate(name)),
            factory.abstraction, factory.skills,
        )
        specs.append(apply_repair(factory.full_spec, v, skills, factory.abstraction))
    for spec in specs:
        solution = check_realizability(spec)
        assert not solution.realizable
        cs = extract_counterstrategy(spec, solution)
        assert_counterstrategy_objective(spec, cs)


def test_repaired_factory_strategy_is_objective_sound(factory):
    v = factory.violation("cup")
    skills = typecheck_skills(
        parse_skills(factory.candidate("y_new")),
        factory.abstraction, factory.skills,
    )
    spec = apply_repair(factory.full_spec, v, skills, factory.abstraction)
    solution = check_realizability(spec)
    assert solution.realizable
    assert_strategy_objective(spec, extract_strategy(spec, solution))


# ---------------------------------------------------------------------------
# randomized
# ---------------------------------------------------------------------------

def test_random_strategies_are_objective_sound():
    rng = random.Random(2718)
    checked = 0
    while checked < 60:
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if not solution.realizable:
            continue
        checked += 1
        strategy = extract_strategy(spec, solution)
        assert_strategy_objective(spec, strategy)


def test_random_counterstrategies_are_objective_sound():
    rng = random.Random(3141)
    checked = 0
    while checked < 60:
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if solution.realizable:
            continue
        checked += 1
        cs = extract_counterstrategy(spec, solution)
        assert_counterstrategy_objective(spec, cs)
