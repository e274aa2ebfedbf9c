#!/usr/bin/env python3
"""Regenerate the golden prompt files under tests/goldens/.

Run after any deliberate template or fixture change:
    python3 scripts/make_goldens.py
"""
from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from gr1repair.abstraction import (  # noqa: E402
    abstraction_from_json,
    compile_skills,
    skills_from_json,
)
from gr1repair.llm import (  # noqa: E402
    InformalizationExample,
    build_abstraction_inform_prompt,
    build_repair_prompt,
    build_strategy_inform_prompt,
)
from gr1repair.logic import spec_from_json  # noqa: E402
from gr1repair.orchestrator import RepairProblem  # noqa: E402
from gr1repair.synthesis import extract_strategy  # noqa: E402
from gr1repair.violation import Violation  # noqa: E402

FIXTURES = ROOT / "src" / "gr1repair" / "fixtures"
GOLDENS = ROOT / "tests" / "goldens"


def main():
    factory = FIXTURES / "factory"
    abstraction = abstraction_from_json((factory / "abstraction.json").read_text())
    skills = skills_from_json((factory / "skills.json").read_text())
    base = spec_from_json((factory / "base_spec.json").read_text())
    task = spec_from_json((factory / "task_spec.json").read_text())
    full = compile_skills(abstraction, skills, base)
    violation = Violation.from_json((factory / "violations" / "cup.json").read_text())
    example = InformalizationExample.from_dict(
        json.loads(
            (FIXTURES / "mini_world" / "informalization_example.json").read_text()
        )
    )
    description = (factory / "informalization" / "abstraction_description.txt").read_text()
    behavior = (factory / "informalization" / "behavior.txt").read_text()
    problem = RepairProblem(
        abstraction=abstraction, skills=tuple(skills), task_spec=task,
        full_spec=full, violation=violation, examples=(example,),
    )
    strategy = extract_strategy(full)

    GOLDENS.mkdir(parents=True, exist_ok=True)
    (GOLDENS / "abstraction_inform_prompt.txt").write_text(
        build_abstraction_inform_prompt(abstraction)
    )
    (GOLDENS / "strategy_inform_prompt.txt").write_text(
        build_strategy_inform_prompt(example, description, task, strategy)
    )
    (GOLDENS / "repair_prompt.txt").write_text(
        build_repair_prompt(
            description, task, behavior, violation, problem.violated_formulas()
        )
    )
    print(f"goldens written under {GOLDENS}")


if __name__ == "__main__":
    main()
