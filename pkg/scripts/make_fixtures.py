#!/usr/bin/env python3
"""Regenerate the shipped workspace fixtures from their programmatic form.

Run from the repository root:  python3 scripts/make_fixtures.py
"""
from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

FIXTURES = ROOT / "src" / "gr1repair" / "fixtures"


def one_hot(props):
    parts = []
    for p in props:
        literals = [(q, q == p) for q in props]
        parts.append(
            " & ".join(f"{q}'" if pos else f"!{q}'" for q, pos in literals)
        )
    return " | ".join(f"({part})" for part in parts)


def pin(true_props, all_props):
    return " & ".join(
        p if p in true_props else f"!{p}" for p in all_props
    )


def factory():
    base_regions = ["x0", "x1", "x2", "x3", "x4"]
    base_props = [f"p_base_{r}" for r in base_regions]
    cup_props = ["p_cup_t2", "p_cup_ee", "p_cup_t4"]
    block_props = ["p_block_t0", "p_block_t3"]
    unc = ["empty", "p_cone_x3", "p_stone_t3"]
    inputs = base_props + cup_props + block_props + unc

    abstraction = {
        "propositions": (
            [{"name": p, "kind": "controllable"}
             for p in base_props + cup_props + block_props]
            + [{"name": p, "kind": "uncontrollable"} for p in unc]
        ),
        "grounding": {
            **{f"p_base_{r}": f"the robot base is in region {r}"
               for r in base_regions},
            "p_cup_t2": "the cup is on the loading table t2 (next to x4)",
            "p_cup_ee": "the cup is held in the robot end-effector",
            "p_cup_t4": "the cup is on the assembly table t4 (next to x0)",
            "p_block_t0": "the block is on table t0",
            "p_block_t3": "the block is on table t3",
            "empty": "the cup is empty",
            "p_cone_x3": "the cone obstacle occupies region x3",
            "p_stone_t3": "the stone obstacle sits at table t3",
        },
        "groups": [
            {"name": "base", "propositions": base_props, "exclusive": True},
            {"name": "cup", "propositions": cup_props, "exclusive": True},
            {"name": "block", "propositions": block_props, "exclusive": True},
        ],
        "topology": {
            "x0": ["x1", "x2"],
            "x1": ["x0", "x2", "x4"],
            "x2": ["x0", "x1", "x3", "x4"],
            "x3": ["x2", "x4"],
            "x4": ["x1", "x2", "x3"],
        },
    }

    skills = {
        "pick_cup_t2": [
            [["p_base_x4", "p_cup_t2"], [["p_base_x4", "p_cup_ee"]]],
        ],
        "place_cup_t2": [
            [["p_base_x4", "p_cup_ee"], [["p_base_x4", "p_cup_t2"]]],
        ],
        "move_cup_to_x0": [
            [["p_base_x4", "p_cup_ee"], [["p_base_x2", "p_cup_ee"]]],
            [["p_base_x2", "p_cup_ee"], [["p_base_x0", "p_cup_ee"]]],
        ],
        "place_cup_t4": [
            [["p_base_x0", "p_cup_ee"], [["p_base_x0", "p_cup_t4"]]],
        ],
    }

    init_true = ["p_base_x4", "p_cup_t2", "p_block_t0", "p_cone_x3", "p_stone_t3"]
    env_init = pin(init_true, inputs)

    base_spec = {
        "propositions": abstraction["propositions"],
        "env_init": env_init,
        "env_safety": [
            # the refilling station is the only place the cup status changes
            "!p_cup_t2 -> (empty <-> empty')",
            "p_cone_x3 <-> p_cone_x3'",
            "p_stone_t3 <-> p_stone_t3'",
            "(p_block_t0 <-> p_block_t0') & (p_block_t3 <-> p_block_t3')",
            one_hot(base_props),
            one_hot(cup_props),
            one_hot(block_props),
        ],
        "env_liveness": [],
        "sys_init": "TRUE",
        "sys_safety": [
            "!(p_base_x3' & p_cone_x3')",
        ],
        "sys_liveness": [
            "empty -> p_cup_t2",
            "!empty -> p_cup_t4",
        ],
    }

    task_spec = {
        "propositions": abstraction["propositions"]
        + [{"name": s, "kind": "output"} for s in skills],
        "env_init": env_init,
        "env_safety": ["!p_cup_t2 -> (empty <-> empty')"],
        "env_liveness": [],
        "sys_init": "TRUE",
        "sys_safety": ["!(p_base_x3' & p_cone_x3')"],
        "sys_liveness": ["empty -> p_cup_t2", "!empty -> p_cup_t4"],
    }

    sigma_x = ["p_base_x2", "p_cup_ee", "p_block_t0", "p_cone_x3", "p_stone_t3"]
    violations = {
        "cup": {
            "inputs": sigma_x,
            "outputs": ["move_cup_to_x0"],
            "next_inputs": sorted(sigma_x + ["empty"]),
        },
        "cone": {
            "inputs": init_true,
            "outputs": [],
            "next_inputs": sorted(
                [p for p in init_true if p != "p_cone_x3"]
            ),
        },
        "stone": {
            "inputs": init_true,
            "outputs": [],
            "next_inputs": sorted(
                [p for p in init_true if p != "p_stone_t3"]
            ),
        },
    }

    candidates = {
        # Example repaired skill: back out through x1 to x4 with the cup
        "y_new": {
            "new_skill_0": [
                [["p_base_x2", "p_cup_ee", "p_block_t0"],
                 [["p_base_x1", "p_cup_ee", "p_block_t0"]]],
                [["p_base_x1", "p_cup_ee", "p_block_t0"],
                 [["p_base_x4", "p_cup_ee", "p_block_t0"]]],
            ]
        },
        # unsafe candidate: drives through the cone region x3
        "unsafe": {
            "new_skill_0": [
                [["p_base_x2", "p_cup_ee"], [["p_base_x3", "p_cup_ee"]]],
                [["p_base_x3", "p_cup_ee"], [["p_base_x4", "p_cup_ee"]]],
            ]
        },
        # never-applicable candidate: presumes the block sits on t3
        "unlive": {
            "new_skill_0": [
                [["p_base_x2", "p_cup_ee", "p_block_t3"],
                 [["p_base_x4", "p_cup_ee", "p_block_t3"]]],
            ]
        },
    }

    out = FIXTURES / "factory"
    out.mkdir(parents=True, exist_ok=True)
    (out / "abstraction.json").write_text(json.dumps(abstraction, indent=2) + "\n")
    (out / "skills.json").write_text(json.dumps(skills, indent=2) + "\n")
    (out / "base_spec.json").write_text(json.dumps(base_spec, indent=2) + "\n")
    (out / "task_spec.json").write_text(json.dumps(task_spec, indent=2) + "\n")
    vdir = out / "violations"
    vdir.mkdir(exist_ok=True)
    for name, v in violations.items():
        (vdir / f"{name}.json").write_text(json.dumps(v, indent=2) + "\n")
    cdir = out / "candidates"
    cdir.mkdir(exist_ok=True)
    for name, c in candidates.items():
        (cdir / f"{name}.json").write_text(json.dumps(c, indent=2) + "\n")


def mini_world():
    props = [f"p_base_x{k}" for k in range(4)]
    abstraction = {
        "propositions": [{"name": p, "kind": "controllable"} for p in props],
        "grounding": {
            f"p_base_x{k}": f"the robot base is in region x{k}" for k in range(4)
        },
        "groups": [{"name": "base", "propositions": props, "exclusive": True}],
        "topology": {
            "x0": ["x1"], "x1": ["x0", "x3"], "x2": ["x1"], "x3": ["x1"],
        },
    }
    skills = {
        "skill0": [
            [["p_base_x0"], [["p_base_x1"]]],
            [["p_base_x1"], [["p_base_x3"]]],
        ],
        "skill1": [
            [["p_base_x3"], [["p_base_x1"]]],
            [["p_base_x1"], [["p_base_x0"]]],
        ],
    }
    base_spec = {
        "propositions": abstraction["propositions"],
        "env_init": pin(["p_base_x0"], props),
        "env_safety": [one_hot(props)],
        "env_liveness": [],
        "sys_init": "TRUE",
        "sys_safety": [],
        "sys_liveness": ["p_base_x0", "p_base_x3"],
    }
    task_spec = {
        "propositions": abstraction["propositions"]
        + [{"name": s, "kind": "output"} for s in skills],
        "env_init": pin(["p_base_x0"], props),
        "env_safety": [],
        "env_liveness": [],
        "sys_init": "TRUE",
        "sys_safety": [],
        "sys_liveness": ["p_base_x0", "p_base_x3"],
    }
    out = FIXTURES / "mini_world"
    out.mkdir(parents=True, exist_ok=True)
    (out / "abstraction.json").write_text(json.dumps(abstraction, indent=2) + "\n")
    (out / "skills.json").write_text(json.dumps(skills, indent=2) + "\n")
    (out / "base_spec.json").write_text(json.dumps(base_spec, indent=2) + "\n")
    (out / "task_spec.json").write_text(json.dumps(task_spec, indent=2) + "\n")


def swarm_world():
    props = [f"p_swarm_x{k}" for k in range(4)]
    abstraction = {
        "propositions": [{"name": p, "kind": "controllable"} for p in props],
        "grounding": {
            f"p_swarm_x{k}": f"some robot of the swarm occupies region x{k}"
            for k in range(4)
        },
        "groups": [{"name": "swarm", "propositions": props, "exclusive": False}],
        "topology": None,
    }
    skills = {
        "skill0": [[["p_swarm_x0"], [["p_swarm_x1", "p_swarm_x2"]]]],
        "skill1": [[["p_swarm_x1", "p_swarm_x2"], [["p_swarm_x3"]]]],
        "skill2": [[["p_swarm_x3"], [["p_swarm_x1", "p_swarm_x2"]]]],
        "skill3": [[["p_swarm_x1", "p_swarm_x2"], [["p_swarm_x0"]]]],
    }
    only = {
        "x0": "p_swarm_x0 & !p_swarm_x1 & !p_swarm_x2 & !p_swarm_x3",
        "x3": "p_swarm_x3 & !p_swarm_x0 & !p_swarm_x1 & !p_swarm_x2",
    }
    base_spec = {
        "propositions": abstraction["propositions"],
        "env_init": pin(["p_swarm_x0"], props),
        "env_safety": [],
        "env_liveness": [],
        "sys_init": "TRUE",
        "sys_safety": [],
        "sys_liveness": [only["x0"], only["x3"]],
    }
    out = FIXTURES / "swarm_world"
    out.mkdir(parents=True, exist_ok=True)
    (out / "abstraction.json").write_text(json.dumps(abstraction, indent=2) + "\n")
    (out / "skills.json").write_text(json.dumps(skills, indent=2) + "\n")
    (out / "base_spec.json").write_text(json.dumps(base_spec, indent=2) + "\n")


MINI_BEHAVIOR = (
    "Initially, the robot's base is in x0, and the liveness goal `p_base_x0`, "
    "which requires the base to repeatedly reach x0, is satisfied. The robot "
    "then executes skill0 to move to x1 and then x3, satisfying the liveness "
    "goal `p_base_x3`, which requires the base to repeatedly reach x3. Next, "
    "the robot executes skill1 to move back to x0 via x1, satisfying the "
    "liveness goal `p_base_x0` again. This behavior continues indefinitely."
)

MINI_EXPLANATION = (
    "\"Initially, the robot's base is in x0, and the liveness goal "
    "`p_base_x0`, which requires the base to repeatedly reach x0, is "
    "satisfied\" corresponds to node 0. \"The robot then executes skill0 to "
    "move to x1 and then x3, satisfying the liveness goal `p_base_x3`, which "
    "requires the base to repeatedly reach x3\" corresponds to the "
    "transitions from node 0 to node 1, node 2, and then node 3; the "
    "self-loops on nodes 1 and 2 cover steps where the motion has not "
    "completed yet. \"Next, the robot executes skill1 to move back to x0 via "
    "x1, satisfying the liveness goal `p_base_x0` again\" corresponds to the "
    "transitions from node 3 to node 4, node 5, and then back to node 0."
)

SWARM_BEHAVIOR = (
    "Initially, the robot swarm is in x0 only, and the liveness goal "
    "`p_swarm_x0 & !p_swarm_x1 & !p_swarm_x2 & !p_swarm_x3`, which requires "
    "the swarm to repeatedly gather in x0 alone, is satisfied. The swarm "
    "then executes skill0 to spread into x1 and x2, and then skill1 to "
    "gather in x3, satisfying the goal `p_swarm_x3 & !p_swarm_x0 & "
    "!p_swarm_x1 & !p_swarm_x2`, which requires the swarm to repeatedly "
    "gather in x3 alone. Next, the swarm executes skill2 to spread back "
    "into x1 and x2, and finally skill3 to gather in x0, satisfying the "
    "first goal again. This behavior continues indefinitely."
)

SWARM_EXPLANATION = (
    "\"Initially, the robot swarm is in x0 only\" corresponds to node 0. "
    "\"The swarm then executes skill0 to spread into x1 and x2, and then "
    "skill1 to gather in x3\" corresponds to the transitions from node 0 "
    "through the skill0 and skill1 nodes until the node whose state has "
    "only p_swarm_x3 set; self-loops cover steps where a motion has not "
    "completed yet. \"Next, the swarm executes skill2 to spread back into "
    "x1 and x2, and finally skill3 to gather in x0\" corresponds to the "
    "remaining transitions leading back to node 0."
)

FACTORY_DESCRIPTION = (
    "Each input proposition of the form p_object_region states that the "
    "named object currently occupies the named region: p_base_xk locates "
    "the robot base in region xk, while p_cup_t2, p_cup_ee, and p_cup_t4 "
    "locate the cup on the loading table t2, in the robot end-effector, or "
    "on the assembly table t4, and p_block_t0/p_block_t3 and p_stone_t3 "
    "locate the block and the stone on their tables. The proposition empty "
    "reports the status of the cup and is true exactly when the cup is "
    "empty; p_cone_x3 reports that the cone obstacle occupies region x3.\n"
)

FACTORY_BEHAVIOR = (
    "Initially the robot base is at x4, the cup is full and sits on the "
    "loading table t2, the block is on t0, the cone occupies x3, and the "
    "stone sits at t3. While the cup is not empty, the robot picks it up "
    "with pick_cup_t2, carries it from x4 through x2 to x0 with "
    "move_cup_to_x0, and places it on the assembly table with place_cup_t4, "
    "satisfying the goal that a full cup repeatedly reaches t4. Whenever "
    "the cup is empty, the robot keeps it at the loading table t2, where it "
    "can be refilled, satisfying the goal that an empty cup repeatedly "
    "reaches t2. The robot stays idle whenever both goals are already "
    "satisfied.\n"
)


def informalization_assets():
    from gr1repair.abstraction import abstraction_from_json, compile_skills, skills_from_json
    from gr1repair.logic import spec_from_json
    from gr1repair.synthesis import extract_strategy

    def synthesized(world):
        fix = FIXTURES / world
        a = abstraction_from_json((fix / "abstraction.json").read_text())
        sk = skills_from_json((fix / "skills.json").read_text())
        base = spec_from_json((fix / "base_spec.json").read_text())
        phi = compile_skills(a, sk, base)
        return extract_strategy(phi), sk

    mini_strategy, mini_skills = synthesized("mini_world")
    mini_task = json.loads((FIXTURES / "mini_world" / "task_spec.json").read_text())
    object_example = {
        "inputs": [f"p_base_x{k}" for k in range(4)],
        "outputs": [s.name for s in mini_skills],
        "task_spec": mini_task,
        "strategy": mini_strategy.to_dict(),
        "behavior": MINI_BEHAVIOR,
        "explanation": MINI_EXPLANATION,
    }
    (FIXTURES / "mini_world" / "informalization_example.json").write_text(
        json.dumps(object_example, indent=1) + "\n"
    )

    swarm_strategy, swarm_skills = synthesized("swarm_world")
    swarm_base = json.loads((FIXTURES / "swarm_world" / "base_spec.json").read_text())
    swarm_example = {
        "inputs": [f"p_swarm_x{k}" for k in range(4)],
        "outputs": [s.name for s in swarm_skills],
        "task_spec": swarm_base,
        "strategy": swarm_strategy.to_dict(),
        "behavior": SWARM_BEHAVIOR,
        "explanation": SWARM_EXPLANATION,
    }
    (FIXTURES / "swarm_world" / "informalization_example.json").write_text(
        json.dumps(swarm_example, indent=1) + "\n"
    )

    inform = FIXTURES / "factory" / "informalization"
    inform.mkdir(parents=True, exist_ok=True)
    (inform / "abstraction_description.txt").write_text(FACTORY_DESCRIPTION)
    (inform / "behavior.txt").write_text(FACTORY_BEHAVIOR)


def replay_sessions():
    candidates = FIXTURES / "factory" / "candidates"

    def fenced(path):
        return "```JSON\n" + (candidates / path).read_text().strip() + "\n```"

    responses = [
        "I will add a skill that retreats from x2.\n"
        "```JSON\n{\"new_skill_0\": [[[\"p_base_x2\", \"p_cup_ee\"], []]]}\n```",
        "The robot can return to x4 through x3:\n" + fenced("unsafe.json"),
        "Avoiding x3, the robot can jump back to x4 once the block is "
        "out of the way:\n" + fenced("unlive.json"),
        "Backing out through x1 keeps clear of the cone:\n" + fenced("y_new.json"),
    ]
    replay = FIXTURES / "factory" / "replay"
    replay.mkdir(parents=True, exist_ok=True)
    (replay / "cup_session.json").write_text(
        json.dumps({"responses": responses}, indent=1) + "\n"
    )
    (replay / "immediate_fix.json").write_text(
        json.dumps({"responses": [responses[3]]}, indent=1) + "\n"
    )
    (replay / "hopeless.json").write_text(
        json.dumps({"responses": [responses[0]] * 5}, indent=1) + "\n"
    )


if __name__ == "__main__":
    factory()
    mini_world()
    swarm_world()
    informalization_assets()
    replay_sessions()
    print(f"fixtures written under {FIXTURES}")
