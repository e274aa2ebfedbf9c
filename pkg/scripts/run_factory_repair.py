#!/usr/bin/env python3
"""Walk the factory cup violation through the whole pipeline and narrate it.

    python3 scripts/run_factory_repair.py [--http ENDPOINT MODEL]

With no arguments the scripted replay session is used, so the run is fully
offline and deterministic.  With --http the candidate generation goes to an
OpenAI-compatible endpoint (auth from $GR1REPAIR_API_KEY).
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from gr1repair.abstraction import (  # noqa: E402
    abstraction_from_json,
    compile_skills,
    skills_from_json,
)
from gr1repair.llm import HttpChatBackend, InformalizationExample, ReplayBackend  # noqa: E402
from gr1repair.logic import print_formula, spec_from_json  # noqa: E402
from gr1repair.orchestrator import RepairProblem, repair  # noqa: E402
from gr1repair.synthesis import check_realizability  # noqa: E402
from gr1repair.violation import Violation  # noqa: E402

FIXTURES = ROOT / "src" / "gr1repair" / "fixtures"


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--http", nargs=2, metavar=("ENDPOINT", "MODEL"))
    parser.add_argument("--max-iters", type=int, default=5)
    args = parser.parse_args()

    factory = FIXTURES / "factory"
    abstraction = abstraction_from_json((factory / "abstraction.json").read_text())
    skills = skills_from_json((factory / "skills.json").read_text())
    base = spec_from_json((factory / "base_spec.json").read_text())
    task = spec_from_json((factory / "task_spec.json").read_text())
    full = compile_skills(abstraction, skills, base)
    violation = Violation.from_json((factory / "violations" / "cup.json").read_text())
    example = InformalizationExample.from_dict(
        json.loads((FIXTURES / "mini_world" / "informalization_example.json").read_text())
    )
    problem = RepairProblem(
        abstraction=abstraction, skills=tuple(skills), task_spec=task,
        full_spec=full, violation=violation, examples=(example,),
    )

    print(f"pre-violation spec: {len(full.propositions)} propositions, "
          f"realizable={check_realizability(full).realizable}")
    print("violated assumptions:")
    for f in problem.violated_formulas():
        print("  ", print_formula(f))

    if args.http:
        backend = HttpChatBackend(endpoint=args.http[0], model=args.http[1])
        informalization = None
    else:
        backend = ReplayBackend.from_json(
            (factory / "replay" / "cup_session.json").read_text()
        )
        inform = factory / "informalization"
        informalization = (
            (inform / "abstraction_description.txt").read_text(),
            (inform / "behavior.txt").read_text(),
        )

    started = time.perf_counter()
    result = repair(problem, backend, max_iterations=args.max_iters,
                    informalization=informalization)
    elapsed = time.perf_counter() - started

    for record in result.iterations:
        print(f"\n--- iteration {record.index}: {record.verdict} "
              f"(kinds={record.feedback_kinds})")
        if record.feedback_text:
            for line in record.feedback_text.splitlines():
                print("   ", line)
    print(f"\noutcome: {result.outcome} after {len(result.iterations)} "
          f"iteration(s) in {elapsed:.1f}s")
    if result.outcome == "repaired":
        print("accepted skills:", ", ".join(s.name for s in result.skills))
    return 0 if result.outcome == "repaired" else 1


if __name__ == "__main__":
    raise SystemExit(main())
