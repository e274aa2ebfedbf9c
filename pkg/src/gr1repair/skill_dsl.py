"""Candidate-skill wire format: extraction, grammar checks, typechecking.

Candidates arrive as a JSON object keyed new_skill_0, new_skill_1, ...
following the published grammar:

    <new_skill>: [<intermediate_transition>+]
    <intermediate_transition> = [<precondition>, [<postcondition>+]]
    <precondition> = [<controllable_input>+]
    <postcondition> = [<controllable_input>+]

Checks never throw on bad candidate content; they return findings whose
rendered messages follow the documented templates byte for byte.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence, Union

from .abstraction import Abstraction, Skill, skill_from_chain, skills_to_dict
from .errors import NoCodeBlockFound

_NAME_RE = re.compile(r"^new_skill_\d+$")
_FENCE_RE = re.compile(r"```\s*json\s*\n(.*?)```", re.IGNORECASE | re.DOTALL)


@dataclass(frozen=True)
class SyntaxFinding:
    skill: str
    path: str
    rule: str
    token: str
    message: str


@dataclass(frozen=True)
class SkillCandidateSet:
    """Structurally valid candidates, not yet typechecked."""

    chains: tuple[tuple[str, tuple], ...]
    provenance: str = ""

    def names(self) -> list[str]:
        return [name for name, _ in self.chains]

    def __len__(self) -> int:
        return len(self.chains)


def extract_json_block(response: str) -> str:
    """Content of the last JSON-labeled fenced block, else the bare object."""
    blocks = _FENCE_RE.findall(response)
    if blocks:
        return blocks[-1].strip()
    stripped = response.strip()
    try:
        if isinstance(json.loads(stripped), dict):
            return stripped
    except (json.JSONDecodeError, ValueError):
        pass
    raise NoCodeBlockFound("response contains no JSON code block")


def _finding(skill, path, rule, token, message) -> SyntaxFinding:
    return SyntaxFinding(
        skill=skill, path=path, rule=rule, token=str(token), message=message
    )


def _is_name_list(value) -> bool:
    return (
        isinstance(value, list)
        and len(value) > 0
        and all(isinstance(e, str) for e in value)
    )


def parse_skills(
    text: str, provenance: str = ""
) -> Union[SkillCandidateSet, list[SyntaxFinding]]:
    """Structural grammar check; returns candidates or findings, never raises."""
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, ValueError) as err:
        return [
            _finding("", "$", "JSON", text[:40],
                     f"response is not valid JSON: {err.msg} at position {err.pos}."
                     if hasattr(err, "msg") else "response is not valid JSON.")
        ]
    if not isinstance(data, dict):
        return [
            _finding("", "$", "<new_skill>", type(data).__name__,
                     "top-level value is not a JSON object of new skills.")
        ]

    findings: list[SyntaxFinding] = []
    chains = []
    for name in data:
        chain = data[name]
        if not isinstance(name, str) or not _NAME_RE.match(name):
            findings.append(
                _finding(str(name), f"{name}", "<new_skill>", name,
                         f"{name} does not match the new_skill_<k> naming pattern.")
            )
            continue
        if not isinstance(chain, list) or not chain:
            findings.append(
                _finding(name, f"{name}", "<intermediate_transition>+", chain,
                         f"{name} must be a non-empty list of intermediate "
                         "transitions.")
            )
            continue
        ok = True
        parsed_chain = []
        for k, transition in enumerate(chain):
            path = f"{name}[{k}]"
            if not isinstance(transition, list) or len(transition) != 2:
                findings.append(
                    _finding(name, path, "<intermediate_transition>", transition,
                             f"{name} transition {k} is not a [precondition, "
                             "[postcondition, ...]] pair.")
                )
                ok = False
                continue
            pre, posts = transition
            if not _is_name_list(pre):
                findings.append(
                    _finding(name, f"{path}.precondition", "<controllable_input>+",
                             pre,
                             f"{name} transition {k} precondition must be a "
                             "non-empty list of controllable inputs.")
                )
                ok = False
            if not isinstance(posts, list) or not posts:
                findings.append(
                    _finding(name, f"{path}.postconditions", "<postcondition>+",
                             posts,
                             f"{name} transition {k} must list at least one "
                             "postcondition.")
                )
                ok = False
                continue
            for p, post in enumerate(posts):
                if not _is_name_list(post):
                    findings.append(
                        _finding(name, f"{path}.postconditions[{p}]",
                                 "<controllable_input>+", post,
                                 f"{name} transition {k} postcondition {p} must "
                                 "be a non-empty list of controllable inputs.")
                    )
                    ok = False
            if ok:
                parsed_chain.append((tuple(pre), tuple(tuple(q) for q in posts)))
        if ok:
            chains.append((name, tuple(parsed_chain)))

    if findings:
        return sorted(findings, key=lambda f: (f.skill, f.path))
    return SkillCandidateSet(chains=tuple(chains), provenance=provenance)


def typecheck_skills(
    candidates: SkillCandidateSet,
    abstraction: Abstraction,
    existing: Sequence[Skill],
) -> Union[list[Skill], list[SyntaxFinding]]:
    """Verify identifiers, group completeness, and novelty; build skills."""
    known = {p.name for p in abstraction.propositions}
    controllable = set(abstraction.controllable_names)
    group_of = {}
    for g in abstraction.groups:
        for prop in g.propositions:
            group_of[prop] = g

    findings: list[SyntaxFinding] = []
    skills: list[Skill] = []
    existing_chains = {
        json.dumps(chain, sort_keys=True): s.name
        for s in existing
        for chain in [skills_to_dict([s])[s.name]]
    }

    for name, chain in candidates.chains:
        bad = False
        mentioned: set[str] = set()

        def conditions():
            for k, (pre, posts) in enumerate(chain):
                yield f"{name}[{k}].precondition", "pre", pre, k
                for p, post in enumerate(posts):
                    yield f"{name}[{k}].postconditions[{p}]", "post", post, k

        for path, role, cond, k in conditions():
            for prop in cond:
                if prop not in known:
                    findings.append(
                        _finding(name, path, "<controllable_input>", prop,
                                 f"{prop} in the {role}condition of {name} is "
                                 "not a declared proposition.")
                    )
                    bad = True
                elif prop not in controllable:
                    findings.append(
                        _finding(name, path, "<controllable_input>", prop,
                                 f"{prop} in the {role}condition of {name} is "
                                 "not a controllable input.")
                    )
                    bad = True
                else:
                    mentioned.add(group_of[prop].name)
        if bad:
            continue

        for path, role, cond, k in conditions():
            by_group: dict[str, list[str]] = {}
            for prop in cond:
                by_group.setdefault(group_of[prop].name, []).append(prop)
            for g in abstraction.groups:
                if g.name not in mentioned or not g.exclusive:
                    continue
                listed = by_group.get(g.name, [])
                if not listed:
                    findings.append(
                        _finding(name, path, "<controllable_input>+", g.name,
                                 f"{name} {role}condition is not a complete "
                                 "controllable input state: "
                                 f"missing {g.name}.")
                    )
                    bad = True
                elif len(listed) > 1:
                    findings.append(
                        _finding(name, path, "<controllable_input>+",
                                 ",".join(listed),
                                 f"{name} {role}condition lists conflicting "
                                 f"propositions {listed[0]} and {listed[1]}.")
                    )
                    bad = True
        if bad:
            continue

        for k in range(len(chain) - 1):
            later = {frozenset(pre) for pre, _ in chain[k + 1:]}
            for p, post in enumerate(chain[k][1]):
                if frozenset(post) not in later:
                    findings.append(
                        _finding(name, f"{name}[{k}].postconditions[{p}]",
                                 "<intermediate_transition>+", ",".join(post),
                                 f"{name} transition {k} postcondition does not "
                                 "match any later precondition.")
                    )
                    bad = True
        if bad:
            continue

        skill = skill_from_chain(
            name, [[list(pre), [list(q) for q in posts]] for pre, posts in chain]
        )
        canon = json.dumps(skills_to_dict([skill])[name], sort_keys=True)
        if canon in existing_chains:
            findings.append(
                _finding(name, name, "<new_skill>", name,
                         f"{name} duplicates existing skill "
                         f"{existing_chains[canon]}.")
            )
            continue
        duplicate_of = next(
            (
                s.name for s in skills
                if json.dumps(skills_to_dict([s])[s.name], sort_keys=True) == canon
            ),
            None,
        )
        if duplicate_of is not None:
            findings.append(
                _finding(name, name, "<new_skill>", name,
                         f"{name} duplicates existing skill {duplicate_of}.")
            )
            continue
        skills.append(skill)

    if findings:
        return sorted(findings, key=lambda f: (f.skill, f.path))
    return skills
