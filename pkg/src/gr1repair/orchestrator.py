"""End-to-end repair loop: informalize, prompt, extract, verify, feed back.

The verification half (grammar check, typecheck, compile+relax,
realizability, counterstrategy analysis) lives in `verify_candidate` so the
same code path serves both the iterative loop and direct candidate-file
verification, independent of any backend.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .abstraction import Abstraction, Skill, is_sub_specification
from .analysis import (
    Feedback,
    liveness_analysis,
    render_feedback,
    safety_analysis,
)
from .errors import Gr1RepairError, NoCodeBlockFound
from .llm import (
    InformalizationExample,
    LLMBackend,
    build_abstraction_inform_prompt,
    build_repair_prompt,
    build_strategy_inform_prompt,
    complete,
)
from .logic import GR1Spec
from .skill_dsl import SkillCandidateSet, extract_json_block, parse_skills, typecheck_skills
from .synthesis import (
    DEFAULT_STATE_BOUND,
    check_realizability,
    extract_counterstrategy,
    extract_strategy,
)
from .violation import Violation, apply_repair, detect_violation


@dataclass(frozen=True)
class RepairProblem:
    abstraction: Abstraction
    skills: tuple[Skill, ...]
    task_spec: GR1Spec
    full_spec: GR1Spec
    violation: Violation
    examples: tuple[InformalizationExample, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "skills", tuple(self.skills))
        object.__setattr__(self, "examples", tuple(self.examples))
        if not is_sub_specification(self.task_spec, self.full_spec):
            raise Gr1RepairError("task specification is not a sub-specification")
        if not self.violated_indices():
            raise Gr1RepairError("the observed transition violates no assumption")

    def violated_indices(self) -> list[int]:
        v = self.violation
        return detect_violation(self.full_spec, v.sigma_x, v.sigma_y, v.sigma_x_next)

    def violated_formulas(self):
        return [self.full_spec.env_safety[i] for i in self.violated_indices()]


@dataclass
class IterationRecord:
    index: int
    prompt: str
    response: str
    verdict: str                 # "repaired" | "syntax" | "unrealizable"
    feedback_kinds: list[str]
    headline_kind: Optional[str]
    feedback_text: str
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "iteration": self.index,
            "prompt": self.prompt,
            "response": self.response,
            "verdict": self.verdict,
            "feedback_kinds": self.feedback_kinds,
            "headline_kind": self.headline_kind,
            "feedback": self.feedback_text,
            "timings": self.timings,
        }


@dataclass
class RepairResult:
    outcome: str                 # "repaired" | "exhausted" | "aborted"
    iterations: list[IterationRecord]
    skills: Optional[list[Skill]] = None
    repaired_spec: Optional[GR1Spec] = None
    last_feedback: Optional[str] = None
    error: Optional[str] = None

    @classmethod
    def repaired(cls, iterations, skills, spec, state_bound) -> "RepairResult":
        # soundness gate: never report success without re-checking
        if not check_realizability(spec, state_bound).realizable:
            raise Gr1RepairError("internal: repaired spec fails the re-check")
        return cls(
            outcome="repaired",
            iterations=iterations,
            skills=list(skills),
            repaired_spec=spec,
        )

    def write_transcript(self, path) -> None:
        with open(path, "w") as fh:
            for record in self.iterations:
                fh.write(json.dumps(record.to_dict()) + "\n")


@dataclass
class Verification:
    verdict: str                         # "repaired" | "syntax" | "unrealizable"
    feedback: list[Feedback]
    skills: Optional[list[Skill]] = None
    repaired_spec: Optional[GR1Spec] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def feedback_text(self) -> str:
        return render_feedback(self.feedback)

    @property
    def kinds(self) -> list[str]:
        seen = []
        for item in self.feedback:
            if item.kind not in seen:
                seen.append(item.kind)
        return seen

    @property
    def headline(self) -> Optional[str]:
        for kind in ("syntax", "safety", "liveness"):
            if any(f.kind == kind for f in self.feedback):
                return kind
        return None


def verify_candidate(
    problem: RepairProblem,
    candidate_text: str,
    state_bound: int = DEFAULT_STATE_BOUND,
    provenance: str = "",
) -> Verification:
    """Grammar, types, compile+relax, realizability, counterstrategy analysis."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    parsed = parse_skills(candidate_text, provenance=provenance)
    if not isinstance(parsed, SkillCandidateSet):
        timings["syntax_check"] = time.perf_counter() - t0
        return Verification(
            verdict="syntax",
            feedback=[Feedback.syntax(f) for f in parsed],
            timings=timings,
        )
    checked = typecheck_skills(parsed, problem.abstraction, list(problem.skills))
    timings["syntax_check"] = time.perf_counter() - t0
    if checked and not isinstance(checked[0], Skill):
        return Verification(
            verdict="syntax",
            feedback=[Feedback.syntax(f) for f in checked],
            timings=timings,
        )
    skills = list(checked)

    t1 = time.perf_counter()
    candidate_spec = apply_repair(
        problem.full_spec, problem.violation, skills, problem.abstraction
    )
    solution = check_realizability(candidate_spec, state_bound)
    timings["realizability"] = time.perf_counter() - t1
    if solution.realizable:
        return Verification(
            verdict="repaired",
            feedback=[],
            skills=skills,
            repaired_spec=candidate_spec,
            timings=timings,
        )

    t2 = time.perf_counter()
    cs = extract_counterstrategy(candidate_spec, solution)
    feedback = safety_analysis(cs, candidate_spec) + liveness_analysis(
        cs, candidate_spec
    )
    timings["feedback"] = time.perf_counter() - t2
    return Verification(verdict="unrealizable", feedback=feedback, timings=timings)


# ---------------------------------------------------------------------------
# informalization (cached once per abstraction/strategy pair)
# ---------------------------------------------------------------------------

_INFORM_CACHE: dict[str, tuple[str, str]] = {}


def clear_informalization_cache() -> None:
    _INFORM_CACHE.clear()


def informalize(
    problem: RepairProblem,
    backend: LLMBackend,
    state_bound: int = DEFAULT_STATE_BOUND,
) -> tuple[str, str]:
    """(abstraction description, strategy behavior), both LLM-produced."""
    solution = check_realizability(problem.full_spec, state_bound)
    strategy = extract_strategy(problem.full_spec, solution)
    key_material = json.dumps(
        {
            "grounding": dict(problem.abstraction.grounding),
            "propositions": [p.name for p in problem.abstraction.propositions],
            "strategy": strategy.to_dict(),
        },
        sort_keys=True,
    )
    key = hashlib.sha256(key_material.encode()).hexdigest()
    if key in _INFORM_CACHE:
        return _INFORM_CACHE[key]
    if not problem.examples:
        raise Gr1RepairError("informalization needs one worked example")
    description = complete(backend, build_abstraction_inform_prompt(problem.abstraction))
    behavior = complete(
        backend,
        build_strategy_inform_prompt(
            problem.examples[0], description, problem.task_spec, strategy
        ),
    )
    _INFORM_CACHE[key] = (description, behavior)
    return description, behavior


# ---------------------------------------------------------------------------
# the repair loop
# ---------------------------------------------------------------------------

def repair(
    problem: RepairProblem,
    backend: LLMBackend,
    max_iterations: int = 5,
    state_bound: int = DEFAULT_STATE_BOUND,
    informalization: Optional[tuple[str, str]] = None,
) -> RepairResult:
    """Iteratively prompt, verify, and feed analysis back until repaired.

    `informalization` short-circuits the two description prompts with
    precomputed text (the offline-informalization path); otherwise both are
    obtained through the backend first.
    """
    iterations: list[IterationRecord] = []
    try:
        if informalization is None:
            informalization = informalize(problem, backend, state_bound)
    except Gr1RepairError as err:
        return RepairResult(
            outcome="aborted", iterations=iterations, error=f"informalize: {err}"
        )
    description, behavior = informalization
    violated = problem.violated_formulas()

    prior_feedback: Optional[str] = None
    prior_candidate: Optional[str] = None
    for index in range(1, max_iterations + 1):
        timings: dict[str, float] = {}
        t0 = time.perf_counter()
        prompt = build_repair_prompt(
            description,
            problem.task_spec,
            behavior,
            problem.violation,
            violated,
            prior_feedback=prior_feedback,
            prior_candidate=prior_candidate,
        )
        timings["prompt_build"] = time.perf_counter() - t0

        t1 = time.perf_counter()
        try:
            response = complete(backend, prompt)
        except Gr1RepairError as err:
            iterations.append(
                IterationRecord(
                    index=index, prompt=prompt, response="",
                    verdict="aborted", feedback_kinds=[], headline_kind=None,
                    feedback_text="", timings=timings,
                )
            )
            return RepairResult(
                outcome="aborted", iterations=iterations,
                error=f"iteration {index}: {err}",
            )
        timings["llm"] = time.perf_counter() - t1

        try:
            candidate_text = extract_json_block(response)
        except NoCodeBlockFound:
            feedback = [
                Feedback(
                    kind="syntax",
                    rendered="The response does not contain a JSON code block.",
                )
            ]
            record = IterationRecord(
                index=index, prompt=prompt, response=response,
                verdict="syntax", feedback_kinds=["syntax"],
                headline_kind="syntax",
                feedback_text=render_feedback(feedback), timings=timings,
            )
            iterations.append(record)
            prior_feedback = record.feedback_text
            prior_candidate = response
            continue

        try:
            verification = verify_candidate(
                problem, candidate_text, state_bound,
                provenance=f"iteration {index}",
            )
        except Gr1RepairError as err:
            iterations.append(
                IterationRecord(
                    index=index, prompt=prompt, response=response,
                    verdict="aborted", feedback_kinds=[], headline_kind=None,
                    feedback_text="", timings=timings,
                )
            )
            return RepairResult(
                outcome="aborted", iterations=iterations,
                error=f"iteration {index}: {err}",
            )
        timings.update(verification.timings)

        record = IterationRecord(
            index=index, prompt=prompt, response=response,
            verdict=verification.verdict,
            feedback_kinds=verification.kinds,
            headline_kind=verification.headline,
            feedback_text=verification.feedback_text,
            timings=timings,
        )
        iterations.append(record)

        if verification.verdict == "repaired":
            return RepairResult.repaired(
                iterations, verification.skills, verification.repaired_spec,
                state_bound,
            )
        prior_feedback = record.feedback_text
        prior_candidate = candidate_text

    return RepairResult(
        outcome="exhausted",
        iterations=iterations,
        last_feedback=prior_feedback,
    )
