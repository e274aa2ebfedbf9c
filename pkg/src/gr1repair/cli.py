"""Command-line surface: synthesize, verify, analyze, repair.

All commands read file-based inputs (validated up front), print either
human-readable text or the same content as JSON, and write artifacts only
under the configured output directory.

Exit codes: 0 success; 1 input/usage error; 2 candidate syntax failure;
3 unrealizable / not repaired; 4 solver or backend error; 5 iteration
budget exhausted.
"""
from __future__ import annotations

import json
import pathlib
import sys
from dataclasses import dataclass
from typing import Optional

import click

from .abstraction import (
    Abstraction,
    abstraction_from_json,
    compile_skills,
    skills_from_json,
)
from .analysis import liveness_analysis, render_feedback, safety_analysis
from .errors import Gr1RepairError
from .llm import API_KEY_ENV, HttpChatBackend, InformalizationExample, ReplayBackend
from .logic import GR1Spec, spec_from_json, spec_to_dict
from .orchestrator import RepairProblem, repair, verify_candidate
from .synthesis import (
    DEFAULT_STATE_BOUND,
    Counterstrategy,
    check_realizability,
    extract_counterstrategy,
    extract_strategy,
)
from .violation import Violation, relax_assumptions

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SYNTAX = 2
EXIT_UNREALIZABLE = 3
EXIT_SOLVER = 4
EXIT_EXHAUSTED = 5


@dataclass
class ProjectConfig:
    abstraction: Abstraction
    skills: list
    base_spec: GR1Spec
    full_spec: GR1Spec
    task_spec: Optional[GR1Spec]
    violation: Optional[Violation]
    examples: list[InformalizationExample]
    state_bound: int
    out_dir: pathlib.Path
    fmt: str


def _read(path: str) -> str:
    p = pathlib.Path(path)
    if not p.is_file():
        raise click.ClickException(f"no such file: {path}")
    return p.read_text()


def _load_config(abstraction, skills, spec, task, violation, examples,
                 state_bound, out, fmt) -> ProjectConfig:
    try:
        abstraction_obj = abstraction_from_json(_read(abstraction))
        skills_obj = skills_from_json(_read(skills)) if skills else []
        base = spec_from_json(_read(spec))
        full = compile_skills(abstraction_obj, skills_obj, base)
        task_obj = spec_from_json(_read(task)) if task else None
        violation_obj = Violation.from_json(_read(violation)) if violation else None
        example_objs = []
        if examples:
            data = json.loads(_read(examples))
            if isinstance(data, dict):
                data = [data]
            example_objs = [InformalizationExample.from_dict(d) for d in data]
    except Gr1RepairError as err:
        raise click.ClickException(str(err))
    out_dir = pathlib.Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return ProjectConfig(
        abstraction=abstraction_obj,
        skills=skills_obj,
        base_spec=base,
        full_spec=full,
        task_spec=task_obj,
        violation=violation_obj,
        examples=example_objs,
        state_bound=state_bound,
        out_dir=out_dir,
        fmt=fmt,
    )


def _emit(fmt: str, payload: dict, text_lines: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, indent=1))
    else:
        for line in text_lines:
            click.echo(line)


def _common(fn):
    fn = click.option("--abstraction", required=True, help="abstraction JSON")(fn)
    fn = click.option("--skills", default=None, help="existing skills JSON")(fn)
    fn = click.option("--spec", "spec", required=True,
                      help="base specification JSON (skills are compiled in)")(fn)
    fn = click.option("--task", default=None, help="task specification JSON")(fn)
    fn = click.option("--violation", default=None, help="violation triplet JSON")(fn)
    fn = click.option("--examples", default=None,
                      help="informalization example(s) JSON")(fn)
    fn = click.option("--state-bound", default=DEFAULT_STATE_BOUND, type=int,
                      show_default=True, help="explicit game state bound")(fn)
    fn = click.option("--out", default="gr1repair-out", show_default=True,
                      help="output directory")(fn)
    fn = click.option("--format", "fmt", default="text",
                      type=click.Choice(["text", "json"]), show_default=True)(fn)
    return fn


@click.group()
def main():
    """Repair reactive robot controllers under assumption violations."""


@main.command()
@_common
def synthesize(abstraction, skills, spec, task, violation, examples,
               state_bound, out, fmt):
    """Check realizability; write the strategy or counterstrategy."""
    config = _load_config(abstraction, skills, spec, task, violation, examples,
                          state_bound, out, fmt)
    target = config.full_spec
    if config.violation is not None:
        target = relax_assumptions(target, config.violation)
    try:
        solution = check_realizability(target, config.state_bound)
        if solution.realizable:
            automaton = extract_strategy(target, solution)
            path = config.out_dir / "strategy.json"
            verdict = "Realizable"
        else:
            automaton = extract_counterstrategy(target, solution)
            path = config.out_dir / "counterstrategy.json"
            verdict = "Unrealizable"
    except Gr1RepairError as err:
        click.echo(f"solver error: {err}", err=True)
        sys.exit(EXIT_SOLVER)
    path.write_text(automaton.to_json())
    _emit(fmt, {"verdict": verdict, "automaton": str(path),
                "nodes": len(automaton.nodes)},
          [verdict, f"automaton written to {path} ({len(automaton.nodes)} nodes)"])
    sys.exit(EXIT_OK)


@main.command()
@_common
@click.argument("candidate_file")
def verify(abstraction, skills, spec, task, violation, examples,
           state_bound, out, fmt, candidate_file):
    """Parse, typecheck, compile, and realizability-check a candidate file."""
    config = _load_config(abstraction, skills, spec, task, violation, examples,
                          state_bound, out, fmt)
    if config.violation is None:
        raise click.ClickException("verify requires --violation")
    problem = _make_problem(config)
    candidate = _read(candidate_file)
    try:
        result = verify_candidate(problem, candidate, config.state_bound)
    except Gr1RepairError as err:
        click.echo(f"solver error: {err}", err=True)
        sys.exit(EXIT_SOLVER)
    lines = {"repaired": ["REPAIRED"],
             "syntax": ["SYNTAX FAILURE"],
             "unrealizable": ["UNREALIZABLE"]}[result.verdict]
    if result.feedback:
        lines.append(result.feedback_text)
    _emit(fmt, {"verdict": result.verdict, "feedback": result.feedback_text},
          lines)
    sys.exit({"repaired": EXIT_OK, "syntax": EXIT_SYNTAX,
              "unrealizable": EXIT_UNREALIZABLE}[result.verdict])


@main.command()
@_common
@click.argument("counterstrategy_file")
def analyze(abstraction, skills, spec, task, violation, examples,
            state_bound, out, fmt, counterstrategy_file):
    """Run safety and liveness analyses on a stored counterstrategy."""
    config = _load_config(abstraction, skills, spec, task, violation, examples,
                          state_bound, out, fmt)
    target = config.full_spec
    if config.violation is not None:
        target = relax_assumptions(target, config.violation)
    try:
        cs = Counterstrategy.from_json(_read(counterstrategy_file))
    except (KeyError, ValueError, json.JSONDecodeError) as err:
        raise click.ClickException(f"cannot parse counterstrategy: {err}")
    feedback = safety_analysis(cs, target) + liveness_analysis(cs, target)
    text = render_feedback(feedback)
    _emit(fmt,
          {"findings": [
              {"kind": f.kind, "rendered": f.rendered} for f in feedback
          ]},
          [text] if text else ["no findings"])
    sys.exit(EXIT_OK)


@main.command(name="repair")
@_common
@click.option("--backend", type=click.Choice(["replay", "http"]), default="replay",
              show_default=True)
@click.option("--replay-file", default=None, help="ordered responses JSON")
@click.option("--endpoint", default=None, help="chat-completions base URL")
@click.option("--model", default=None, help="model name for the http backend")
@click.option("--max-iters", default=5, show_default=True, type=int)
@click.option("--inform-dir", default=None,
              help="directory with abstraction_description.txt and behavior.txt")
def repair_cmd(abstraction, skills, spec, task, violation, examples,
               state_bound, out, fmt, backend, replay_file, endpoint, model,
               max_iters, inform_dir):
    """Run the full iterative repair loop and write the session transcript."""
    config = _load_config(abstraction, skills, spec, task, violation, examples,
                          state_bound, out, fmt)
    if config.violation is None:
        raise click.ClickException("repair requires --violation")
    problem = _make_problem(config)

    if backend == "replay":
        if not replay_file:
            raise click.ClickException("--backend replay requires --replay-file")
        engine = ReplayBackend.from_json(_read(replay_file))
    else:
        if not endpoint or not model:
            raise click.ClickException("--backend http requires --endpoint and "
                                       f"--model (auth via ${API_KEY_ENV})")
        engine = HttpChatBackend(endpoint=endpoint, model=model)

    informalization = None
    if inform_dir:
        base = pathlib.Path(inform_dir)
        informalization = (
            (base / "abstraction_description.txt").read_text(),
            (base / "behavior.txt").read_text(),
        )

    result = repair(
        problem, engine,
        max_iterations=max_iters,
        state_bound=config.state_bound,
        informalization=informalization,
    )
    transcript = config.out_dir / "transcript.jsonl"
    result.write_transcript(transcript)
    payload = {
        "outcome": result.outcome,
        "iterations": len(result.iterations),
        "transcript": str(transcript),
        "backend": backend,
        "model": model,
        "error": result.error,
    }
    lines = [f"outcome: {result.outcome}",
             f"iterations: {len(result.iterations)}",
             f"transcript written to {transcript}"]
    if result.outcome == "repaired":
        spec_path = config.out_dir / "repaired_spec.json"
        spec_path.write_text(json.dumps(spec_to_dict(result.repaired_spec), indent=1))
        payload["repaired_spec"] = str(spec_path)
        lines.append(f"repaired specification written to {spec_path}")
    if result.error:
        lines.append(f"error: {result.error}")
    _emit(fmt, payload, lines)
    sys.exit({"repaired": EXIT_OK, "exhausted": EXIT_EXHAUSTED,
              "aborted": EXIT_SOLVER}[result.outcome])


def _make_problem(config: ProjectConfig) -> RepairProblem:
    task = config.task_spec if config.task_spec is not None else config.full_spec
    try:
        return RepairProblem(
            abstraction=config.abstraction,
            skills=tuple(config.skills),
            task_spec=task,
            full_spec=config.full_spec,
            violation=config.violation,
            examples=tuple(config.examples),
        )
    except Gr1RepairError as err:
        raise click.ClickException(str(err))


if __name__ == "__main__":
    main()
