import random

import pytest

from gr1repair.errors import NotRealizable, SpecRealizable, StateSpaceTooLarge
from gr1repair.logic import (
    FALSE,
    UNCONTROLLABLE,
    OUTPUT,
    GR1Spec,
    Proposition,
    eval_transition,
    parse_formula,
)
from gr1repair.synthesis import (
    Counterstrategy,
    check_realizability,
    extract_counterstrategy,
    extract_strategy,
    simulate_strategy,
)
from gr1repair.violation import relax_assumptions

from oracle import ParityOracle
from specgen import random_spec


def tiny_props():
    return (Proposition("x", UNCONTROLLABLE), Proposition("y", OUTPUT))


def test_factory_spec_realizable(factory):
    assert check_realizability(factory.full_spec).realizable


def test_false_goal_unrealizable():
    spec = GR1Spec(propositions=tiny_props(), sys_liveness=(FALSE,))
    assert not check_realizability(spec).realizable


def test_verdicts_match_brute_force_oracle():
    rng = random.Random(2024)
    for _ in range(80):
        spec = random_spec(rng)
        assert check_realizability(spec).realizable == ParityOracle(spec).realizable()


def test_fixpoint_iterates_monotone():
    rng = random.Random(5)
    for _ in range(30):
        spec = random_spec(rng)
        solution = check_realizability(spec)
        sizes = solution.z_iterations
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))
        assert len(sizes) <= len(solution.arena.states) + 2


def test_state_bound_enforced(factory):
    with pytest.raises(StateSpaceTooLarge) as err:
        check_realizability(factory.full_spec, state_bound=4)
    assert err.value.bound == 4
    assert err.value.proposition_count == len(factory.full_spec.propositions)


# ---------------------------------------------------------------------------
# strategy extraction
# ---------------------------------------------------------------------------

def test_mini_world_strategy_cycles(mini_world):
    strategy = extract_strategy(mini_world.full_spec)
    # the documented patrol: x0 -> x0+skill0 -> x1 -> x3 -> x3+skill1 -> x1 -> x0
    assert len(strategy.nodes) == 6
    labels = [sorted(n.state.true_set) for n in strategy.nodes]
    assert labels[0] == ["p_base_x0"]
    ranks = [n.rank for n in strategy.nodes]
    assert set(ranks) == {1, 2}


def test_trivial_goal_single_state_strategy():
    spec = GR1Spec(
        propositions=tiny_props(),
        env_init=parse_formula("!x", ["x"]),
        env_safety=(parse_formula("!x'", ["x"]),),
        sys_init=parse_formula("!y", ["y"]),
        sys_safety=(parse_formula("!y'", ["y"]),),
    )
    strategy = extract_strategy(spec)
    assert len(strategy.nodes) == 1
    assert strategy.nodes[0].transitions == ((frozenset(), 0),)


def test_extract_strategy_requires_realizable():
    spec = GR1Spec(propositions=tiny_props(), sys_liveness=(FALSE,))
    with pytest.raises(NotRealizable):
        extract_strategy(spec)


def test_simulated_strategies_respect_sys_safety():
    rng = random.Random(99)
    checked = 0
    while checked < 25:
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if not solution.realizable:
            continue
        strategy = extract_strategy(spec, solution)
        if not strategy.initial:
            continue
        checked += 1
        steps = 10 * len(strategy.nodes)
        for cur, nxt in simulate_strategy(
            spec, strategy, steps, random.Random(checked), solution
        ):
            for psi in spec.sys_safety:
                assert eval_transition(psi, cur, nxt)


def test_strategy_serialization_schema(mini_world):
    data = extract_strategy(mini_world.full_spec).to_dict()
    assert set(data) == {"variables", "input_variables", "initial", "nodes"}
    for node in data["nodes"].values():
        assert set(node) == {"rank", "state", "trans"}
        assert len(node["state"]) == len(data["variables"])
        assert all(isinstance(t, int) for t in node["trans"])


# ---------------------------------------------------------------------------
# counterstrategy extraction
# ---------------------------------------------------------------------------

def test_relaxed_factory_counterstrategy_has_sink_free_trap(factory):
    from gr1repair.analysis import strongly_connected_components

    relaxed = relax_assumptions(factory.full_spec, factory.violation("cup"))
    solution = check_realizability(relaxed)
    assert not solution.realizable
    cs = extract_counterstrategy(relaxed, solution)
    assert all(not n.is_sink for n in cs.nodes)
    # a cycle where the cup went empty mid-carry and t2 is never reached
    trapped = [
        comp for comp in strongly_connected_components(cs)
        if any(t in comp for v in comp for t in cs.nodes[v].transitions)
        and all(
            "empty" in cs.nodes[v].state.true_set
            and "p_cup_t2" not in cs.nodes[v].state.true_set
            for v in comp
        )
    ]
    assert trapped, "expected a sink-free cycle with the empty cup away from t2"


def test_sys_init_false_gives_initial_sinks():
    spec = GR1Spec(propositions=tiny_props(), sys_init=FALSE)
    cs = extract_counterstrategy(spec)
    assert cs.nodes and all(n.is_sink for n in cs.nodes)
    assert set(cs.initial) == {n.id for n in cs.nodes}


def test_counterstrategy_states_outside_oracle_winning_set():
    rng = random.Random(31)
    checked = 0
    while checked < 20:
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if solution.realizable:
            continue
        checked += 1
        cs = extract_counterstrategy(spec, solution)
        winning = ParityOracle(spec).winning_states()
        for node in cs.nodes:
            if node.is_sink:
                continue  # doomed snapshots are not reachable game states
            assert frozenset(node.state.true_set) not in winning


def test_counterstrategy_env_moves_respect_env_safety():
    rng = random.Random(17)
    checked = 0
    while checked < 20:
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if solution.realizable:
            continue
        checked += 1
        cs = extract_counterstrategy(spec, solution)
        for node in cs.nodes:
            if node.is_sink:
                continue
            for psi in spec.env_safety:
                assert eval_transition(psi, node.state, node.env_move)


def test_goal_rank_changes_are_single_cyclic_steps():
    rng = random.Random(63)
    checked = 0
    while checked < 30:
        spec = random_spec(rng)
        n = len(spec.sys_liveness)
        solution = check_realizability(spec)
        automaton = (
            extract_strategy(spec, solution)
            if solution.realizable
            else extract_counterstrategy(spec, solution)
        )
        checked += 1
        for node in automaton.nodes:
            targets = (
                node.successors()
                if hasattr(node, "successors")
                else list(node.transitions)
            )
            for t in targets:
                succ = automaton.nodes[t]
                assert succ.rank in (node.rank, node.rank % n + 1)


def test_determinacy_exactly_one_automaton():
    rng = random.Random(8)
    for _ in range(40):
        spec = random_spec(rng)
        solution = check_realizability(spec)
        if solution.realizable:
            extract_strategy(spec, solution)
            with pytest.raises(SpecRealizable):
                extract_counterstrategy(spec, solution)
        else:
            extract_counterstrategy(spec, solution)
            with pytest.raises(NotRealizable):
                extract_strategy(spec, solution)


def test_counterstrategy_serialization_roundtrip(factory):
    relaxed = relax_assumptions(factory.full_spec, factory.violation("cup"))
    cs = extract_counterstrategy(relaxed)
    again = Counterstrategy.from_json(cs.to_json())
    assert [n.rank for n in again.nodes] == [n.rank for n in cs.nodes]
    assert [n.transitions for n in again.nodes] == [n.transitions for n in cs.nodes]
    assert [n.state for n in again.nodes] == [n.state for n in cs.nodes]
    for node in cs.nodes:
        if not node.is_sink:
            assert again.nodes[node.id].env_move == node.env_move
