"""Prompt construction and LLM backend plumbing.

Templates are editable text assets with <<slot>> markers; builders fill
every slot and are byte-deterministic for identical inputs.  Two backends
exist: an ordered-replay backend for tests and fixtures, and an
OpenAI-compatible chat-completions HTTP backend with auth taken from an
environment variable (the key never enters prompts, transcripts, or logs).
"""
from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional, Protocol, Sequence

from .abstraction import Abstraction
from .errors import (
    BackendTimeout,
    Gr1RepairError,
    MissingGrounding,
    ReplayExhausted,
    TransportError,
)
from .logic import Formula, GR1Spec, print_formula, spec_to_dict
from .synthesis import Strategy
from .violation import Violation

API_KEY_ENV = "GR1REPAIR_API_KEY"


def _load_template(name: str) -> str:
    ref = resources.files("gr1repair").joinpath(f"fixtures/prompts/{name}.txt")
    return ref.read_text()


def _fill(template: str, slots: Mapping[str, str]) -> str:
    text = template
    for key, value in slots.items():
        text = text.replace(f"<<{key}>>", value)
    if "<<" in text:
        start = text.index("<<")
        raise Gr1RepairError(f"unfilled prompt slot near: {text[start:start + 40]}")
    return text


# ---------------------------------------------------------------------------
# prompt builders
# ---------------------------------------------------------------------------

def build_abstraction_inform_prompt(abstraction: Abstraction) -> str:
    names = [p.name for p in abstraction.propositions]
    for n in names:
        if not abstraction.grounding.get(n):
            raise MissingGrounding(n)
    grounding = "\n".join(f"{n}: {abstraction.grounding[n]}" for n in names)
    return _fill(
        _load_template("abstraction_inform"),
        {
            "input_propositions": json.dumps(names),
            "grounding": grounding,
        },
    )


@dataclass(frozen=True)
class InformalizationExample:
    """One worked strategy-to-description translation for one-shot prompting."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    task_spec: dict
    strategy: dict
    behavior: str
    explanation: str

    def __post_init__(self):
        # the stored automaton must fit the node schema
        nodes = self.strategy.get("nodes")
        variables = self.strategy.get("variables")
        if not isinstance(nodes, dict) or not isinstance(variables, list):
            raise Gr1RepairError("example strategy lacks nodes/variables")
        for key, entry in nodes.items():
            int(key)
            if len(entry["state"]) != len(variables):
                raise Gr1RepairError(
                    f"example strategy node {key} disagrees with variables"
                )
            if "rank" not in entry or "trans" not in entry:
                raise Gr1RepairError(f"example strategy node {key} incomplete")

    def render(self) -> str:
        return "\n".join(
            [
                f"Inputs: {json.dumps(list(self.inputs))}",
                f"Outputs: {json.dumps(list(self.outputs))}",
                "Task specification:",
                json.dumps(self.task_spec, indent=1),
                "Strategy:",
                json.dumps(self.strategy, indent=1),
                "Behavior:",
                self.behavior,
                "Explanation:",
                self.explanation,
            ]
        )

    @classmethod
    def from_dict(cls, data: Mapping) -> "InformalizationExample":
        return cls(
            inputs=tuple(data["inputs"]),
            outputs=tuple(data["outputs"]),
            task_spec=dict(data["task_spec"]),
            strategy=dict(data["strategy"]),
            behavior=data["behavior"],
            explanation=data["explanation"],
        )


def build_strategy_inform_prompt(
    example: InformalizationExample,
    abstraction_description: str,
    task: GR1Spec,
    strategy: Strategy,
) -> str:
    return _fill(
        _load_template("strategy_inform"),
        {
            "example": example.render(),
            "input_propositions": json.dumps(task.input_names()),
            "abstraction_description": abstraction_description.strip(),
            "output_propositions": json.dumps(task.output_names()),
            "task_specification": json.dumps(spec_to_dict(task), indent=1),
            "strategy": strategy.to_json(indent=1),
        },
    )


def build_repair_prompt(
    abstraction_description: str,
    task: GR1Spec,
    behavior: str,
    violation: Violation,
    violated: Sequence[Formula],
    prior_feedback: Optional[str] = None,
    prior_candidate: Optional[str] = None,
) -> str:
    if not violated:
        raise Gr1RepairError("repair prompt needs at least one violated assumption")
    feedback_section = ""
    if prior_feedback:
        parts = ["", "# Feedback from the previous attempt:"]
        if prior_candidate:
            parts += ["## Your previous response was:", prior_candidate]
        parts += [
            "## The verification found the following problems:",
            prior_feedback,
            "Please provide a corrected set of new skills in the same format.",
        ]
        feedback_section = "\n".join(parts)
    return _fill(
        _load_template("repair"),
        {
            "input_propositions": json.dumps(task.input_names()),
            "abstraction_description": abstraction_description.strip(),
            "output_propositions": json.dumps(task.output_names()),
            "task_specification": json.dumps(spec_to_dict(task), indent=1),
            "strategy_behavior": behavior.strip(),
            "violation": json.dumps(violation.to_dict(), indent=1),
            "violated_assumptions": "\n".join(print_formula(f) for f in violated),
            "feedback_section": feedback_section,
        },
    ).rstrip("\n") + "\n"


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------

class LLMBackend(Protocol):
    def complete(self, prompt: str) -> str: ...


@dataclass
class ReplayBackend:
    """Plays back an ordered list of canned responses; fully deterministic."""

    responses: list[str]
    cursor: int = 0
    calls: int = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self.cursor >= len(self.responses):
            raise ReplayExhausted(
                f"replay fixture exhausted after {len(self.responses)} responses"
            )
        out = self.responses[self.cursor]
        self.cursor += 1
        return out

    @classmethod
    def from_json(cls, text: str) -> "ReplayBackend":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["responses"]
        return cls(responses=list(data))


@dataclass
class HttpChatBackend:
    """OpenAI-compatible chat-completions endpoint.

    Sampling parameters are configuration and default to the backend's
    own defaults; when set they ride along in the request payload.
    """

    endpoint: str
    model: str
    api_key_env: str = API_KEY_ENV
    timeout: float = 120.0
    max_retries: int = 2
    temperature: Optional[float] = None
    seed: Optional[int] = None

    def complete(self, prompt: str) -> str:
        payload: dict = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        if self.temperature is not None:
            payload["temperature"] = self.temperature
        if self.seed is not None:
            payload["seed"] = self.seed
        body = json.dumps(payload).encode()
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        url = self.endpoint.rstrip("/") + "/chat/completions"
        last: Optional[Exception] = None
        for _ in range(self.max_retries + 1):
            request = urllib.request.Request(url, data=body, headers=headers)
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    data = json.loads(resp.read().decode())
                return data["choices"][0]["message"]["content"]
            except TimeoutError as err:
                last = BackendTimeout(f"no response within {self.timeout}s")
            except urllib.error.URLError as err:
                if isinstance(getattr(err, "reason", None), TimeoutError):
                    last = BackendTimeout(f"no response within {self.timeout}s")
                else:
                    last = TransportError(str(err))
            except (KeyError, json.JSONDecodeError, ValueError) as err:
                last = TransportError(f"malformed completion payload: {err}")
        assert last is not None
        raise last


def complete(backend: LLMBackend, prompt: str) -> str:
    """Dispatch one prompt; backend errors propagate typed."""
    return backend.complete(prompt)
