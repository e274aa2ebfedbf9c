"""Workspace abstraction and the skill-to-spec compiler.

An abstraction declares the environment inputs, a human-readable grounding
for each, and how controllable inputs cluster into proposition groups
(e.g. one group per object location, mutually exclusive within the group).
Skills are chains of precondition -> postcondition transitions over those
groups; compiling them into a spec produces the output proposition, the
activation/run/mutex rules on the system side, the effect and frame
conjuncts on the environment side, and one completion assumption per skill.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DuplicateSkillName,
    IncompleteConditionState,
    SpecValidationError,
)
from .logic import (
    CONTROLLABLE,
    OUTPUT,
    TRUE,
    And,
    Assignment,
    Atom,
    Formula,
    GR1Spec,
    Iff,
    Implies,
    Not,
    Or,
    Proposition,
    TrueConst,
    conjoin,
    disjoin,
    print_formula,
)


@dataclass(frozen=True)
class PropositionGroup:
    """Controllable inputs that jointly describe one degree of freedom.

    `exclusive` groups hold exactly one true proposition at a time
    (object locations); non-exclusive groups are independent booleans
    (e.g. multi-region swarm occupancy).
    """

    name: str
    propositions: tuple[str, ...]
    exclusive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "propositions", tuple(self.propositions))


@dataclass(frozen=True)
class Abstraction:
    propositions: tuple[Proposition, ...]
    grounding: Mapping[str, str]
    groups: tuple[PropositionGroup, ...] = ()
    topology: Optional[Mapping[str, tuple[str, ...]]] = None

    def __post_init__(self):
        object.__setattr__(self, "propositions", tuple(self.propositions))
        object.__setattr__(self, "groups", tuple(self.groups))
        names = set()
        for p in self.propositions:
            if p.kind == OUTPUT:
                raise SpecValidationError(
                    "abstractions declare inputs only; outputs come from skills"
                )
            if p.name in names:
                raise SpecValidationError(f"duplicate proposition '{p.name}'")
            names.add(p.name)
            if p.name not in self.grounding:
                raise SpecValidationError(
                    f"input proposition '{p.name}' has no grounding descriptor"
                )
        assigned = {}
        for g in self.groups:
            for prop in g.propositions:
                if prop not in names:
                    raise SpecValidationError(
                        f"group '{g.name}' references unknown proposition '{prop}'"
                    )
                if prop in assigned:
                    raise SpecValidationError(
                        f"proposition '{prop}' is in groups "
                        f"'{assigned[prop]}' and '{g.name}'"
                    )
                assigned[prop] = g.name
        for p in self.propositions:
            if p.kind == CONTROLLABLE and p.name not in assigned:
                raise SpecValidationError(
                    f"controllable input '{p.name}' belongs to no group"
                )

    @property
    def controllable_names(self) -> list[str]:
        return [p.name for p in self.propositions if p.kind == CONTROLLABLE]

    def group_of(self, prop: str) -> PropositionGroup:
        for g in self.groups:
            if prop in g.propositions:
                return g
        raise KeyError(prop)


@dataclass(frozen=True)
class SkillTransition:
    precondition: Assignment
    postconditions: tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "postconditions", tuple(self.postconditions))


@dataclass(frozen=True)
class Skill:
    """A named chain of transitions over controllable inputs.

    Conditions determine every group the skill mentions anywhere; groups the
    skill never mentions are unconstrained by it and frame-preserved while
    it runs.
    """

    name: str
    chain: tuple[SkillTransition, ...]

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        if not self.chain:
            raise SpecValidationError(f"skill '{self.name}' has an empty chain")
        for t in self.chain:
            if not t.postconditions:
                raise SpecValidationError(
                    f"skill '{self.name}' has a transition without postconditions"
                )

    @property
    def head(self) -> Assignment:
        return self.chain[0].precondition

    def conditions(self):
        for t in self.chain:
            yield t.precondition
            for p in t.postconditions:
                yield p


def mentioned_groups(abstraction: Abstraction, skill: Skill) -> list[PropositionGroup]:
    touched = set()
    for cond in skill.conditions():
        for prop in cond.true_set:
            try:
                touched.add(abstraction.group_of(prop).name)
            except KeyError:
                pass
    return [g for g in abstraction.groups if g.name in touched]


def validate_skill(abstraction: Abstraction, skill: Skill) -> None:
    """Raise unless the skill respects the abstraction's group discipline."""
    controllable = set(abstraction.controllable_names)
    for cond in skill.conditions():
        for prop in cond.true_set:
            if prop not in controllable:
                raise SpecValidationError(
                    f"skill '{skill.name}' conditions on '{prop}', "
                    "which is not a controllable input"
                )
    for g in mentioned_groups(abstraction, skill):
        if not g.exclusive:
            continue
        for cond in skill.conditions():
            listed = [p for p in g.propositions if p in cond.true_set]
            if len(listed) == 0:
                raise IncompleteConditionState(skill.name, g.name)
            if len(listed) > 1:
                raise SpecValidationError(
                    f"skill '{skill.name}' lists {listed[0]} and {listed[1]} "
                    f"from the exclusive group '{g.name}' in one condition"
                )
    # chain connectivity: a non-final transition's postconditions must each
    # reappear as the precondition of some later transition
    for k in range(len(skill.chain) - 1):
        later = {t.precondition.true_set for t in skill.chain[k + 1:]}
        for post in skill.chain[k].postconditions:
            if post.true_set not in later:
                raise SpecValidationError(
                    f"skill '{skill.name}' transition {k} postcondition "
                    f"{sorted(post.true_set)} matches no later precondition"
                )


# ---------------------------------------------------------------------------
# condition formulas
# ---------------------------------------------------------------------------

def condition_formula(
    abstraction: Abstraction,
    groups: Sequence[PropositionGroup],
    cond: Assignment,
    primed: bool,
) -> Formula:
    """Literal conjunction pinning every proposition of the given groups."""
    literals: list[Formula] = []
    for g in groups:
        for prop in g.propositions:
            atom = Atom(prop, primed)
            literals.append(atom if prop in cond else Not(atom))
    return conjoin(literals)


def _group_same(group: PropositionGroup) -> Formula:
    return conjoin([Iff(Atom(p), Atom(p, True)) for p in group.propositions])


# ---------------------------------------------------------------------------
# compile_skills
# ---------------------------------------------------------------------------

def compile_skills(
    abstraction: Abstraction, skills: Sequence[Skill], base: GR1Spec
) -> GR1Spec:
    """Extend `base` with the game encoding of `skills`.

    Per skill y with transitions (pre_k -> posts_k):
      sys-safety   (!y & y') -> head'           may switch on only at the head
                   (y & y')  -> any pre'        may stay on only mid-chain
                   !(y' & z')                   pairwise output exclusion
      env-safety   (y & pre_k) -> (posts_k' | pre_k')
                                                environment resolves the next
                                                controllable state among the
                                                postconditions or holds
      env-liveness !y | terminal                runs eventually complete
    Frame conjuncts per touched group g: unless some mentioner is active at
    one of its preconditions, g stays unchanged; an existing frame for g is
    widened in place with the new mentioners.

    Compiling an empty skill list returns `base` unchanged.
    """
    if not skills:
        return base

    existing = {p.name for p in base.propositions}
    seen = set()
    for s in skills:
        if s.name in existing:
            raise DuplicateSkillName(
                f"skill '{s.name}' collides with an existing proposition"
            )
        if s.name in seen:
            raise DuplicateSkillName(f"skill '{s.name}' given twice")
        seen.add(s.name)
        validate_skill(abstraction, s)

    props = base.propositions + tuple(Proposition(s.name, OUTPUT) for s in skills)
    prior_outputs = [p.name for p in base.propositions if p.kind == OUTPUT]

    sys_safety = list(base.sys_safety)
    env_safety = list(base.env_safety)
    env_liveness = list(base.env_liveness)

    groups_of = {s.name: mentioned_groups(abstraction, s) for s in skills}

    for s in skills:
        y = Atom(s.name)
        y_next = Atom(s.name, True)
        groups = groups_of[s.name]
        pres = [t.precondition for t in s.chain]

        sys_safety.append(
            Implies(
                And(Not(y), y_next),
                condition_formula(abstraction, groups, s.head, True),
            )
        )
        sys_safety.append(
            Implies(
                And(y, y_next),
                disjoin(
                    [condition_formula(abstraction, groups, p, True) for p in pres]
                ),
            )
        )

        for t in s.chain:
            targets = [a.true_set for a in t.postconditions]
            if t.precondition.true_set not in targets:
                targets.append(t.precondition.true_set)
            env_safety.append(
                Implies(
                    And(y, condition_formula(abstraction, groups, t.precondition, False)),
                    disjoin(
                        [
                            condition_formula(abstraction, groups, Assignment(ts), True)
                            for ts in targets
                        ]
                    ),
                )
            )

        pre_sets = {p.true_set for p in pres}
        terminals = []
        seen_posts = set()
        for t in s.chain:
            for post in t.postconditions:
                if post.true_set in pre_sets or post.true_set in seen_posts:
                    continue
                seen_posts.add(post.true_set)
                terminals.append(condition_formula(abstraction, groups, post, False))
        env_liveness.append(disjoin([Not(y)] + terminals))

    new_names = [s.name for s in skills]
    for i, a in enumerate(new_names):
        for b in prior_outputs:
            sys_safety.append(Not(And(Atom(a, True), Atom(b, True))))
        for b in new_names[i + 1:]:
            sys_safety.append(Not(And(Atom(a, True), Atom(b, True))))

    # frame conjuncts, widened in place when one already exists for the group
    for g in abstraction.groups:
        terms = [
            _engaged(abstraction, s, groups_of[s.name])
            for s in skills
            if g in groups_of[s.name]
        ]
        if not terms:
            continue
        same = _group_same(g)
        replaced = False
        for idx, conj in enumerate(env_safety):
            old = _frame_terms(conj, same)
            if old is None:
                continue
            env_safety[idx] = _frame(old + terms, same)
            replaced = True
            break
        if not replaced:
            env_safety.append(_frame(terms, same))

    return GR1Spec(
        propositions=props,
        env_init=base.env_init,
        env_safety=tuple(env_safety),
        env_liveness=tuple(env_liveness),
        sys_init=base.sys_init,
        sys_safety=tuple(sys_safety),
        sys_liveness=base.sys_liveness,
    )


def _engaged(abstraction: Abstraction, skill: Skill, groups) -> Formula:
    """The skill is running at one of its preconditions."""
    return And(
        Atom(skill.name),
        disjoin(
            [
                condition_formula(abstraction, groups, t.precondition, False)
                for t in skill.chain
            ]
        ),
    )


def _frame(engaged_terms: Sequence[Formula], same: Formula) -> Formula:
    return Implies(conjoin([Not(t) for t in engaged_terms]), same)


def _frame_terms(conjunct: Formula, same: Formula) -> Optional[list[Formula]]:
    """The engaged-terms if `conjunct` is a frame conjunct for this group."""
    if not isinstance(conjunct, Implies) or conjunct.right != same:
        return None
    terms = []
    flat = []
    stack = [conjunct.left]
    while stack:
        f = stack.pop()
        if isinstance(f, And) and not isinstance(f.left, Atom):
            # spine of the antecedent conjunction; engaged terms are Not(...)
            stack.extend([f.right, f.left])
        else:
            flat.append(f)
    for f in flat:
        if isinstance(f, Not) and isinstance(f.arg, And):
            terms.append(f.arg)
        elif isinstance(f, TrueConst):
            continue
        else:
            return None
    return terms


# ---------------------------------------------------------------------------
# sub-specification relation
# ---------------------------------------------------------------------------

def is_sub_specification(task: GR1Spec, full: GR1Spec) -> bool:
    """Initial formulas equal, conjunct sets included, on both sides."""
    full_kinds = {p.name: p.kind for p in full.propositions}
    for p in task.propositions:
        if full_kinds.get(p.name) != p.kind:
            return False

    def canon(fs: Iterable[Formula]) -> set[str]:
        return {print_formula(f) for f in fs} - {print_formula(TRUE)}

    if print_formula(task.env_init) != print_formula(full.env_init):
        return False
    if print_formula(task.sys_init) != print_formula(full.sys_init):
        return False
    return (
        canon(task.env_safety) <= canon(full.env_safety)
        and canon(task.env_liveness) <= canon(full.env_liveness)
        and canon(task.sys_safety) <= canon(full.sys_safety)
        and canon(task.sys_liveness) <= canon(full.sys_liveness)
    )


# ---------------------------------------------------------------------------
# loading from JSON (the skill schema equals the candidate wire format)
# ---------------------------------------------------------------------------

def abstraction_from_dict(data: Mapping) -> Abstraction:
    props = tuple(
        Proposition(e["name"], e["kind"]) for e in data["propositions"]
    )
    groups = tuple(
        PropositionGroup(
            g["name"], tuple(g["propositions"]), bool(g.get("exclusive", True))
        )
        for g in data.get("groups", [])
    )
    topology = data.get("topology")
    if topology is not None:
        topology = {k: tuple(v) for k, v in topology.items()}
    return Abstraction(
        propositions=props,
        grounding=dict(data["grounding"]),
        groups=groups,
        topology=topology,
    )


def abstraction_from_json(text: str) -> Abstraction:
    return abstraction_from_dict(json.loads(text))


def skill_from_chain(name: str, chain: Sequence) -> Skill:
    transitions = []
    for entry in chain:
        pre, posts = entry
        transitions.append(
            SkillTransition(
                precondition=Assignment(pre),
                postconditions=tuple(Assignment(p) for p in posts),
            )
        )
    return Skill(name=name, chain=tuple(transitions))


def skills_from_dict(data: Mapping) -> list[Skill]:
    return [skill_from_chain(name, chain) for name, chain in data.items()]


def skills_from_json(text: str) -> list[Skill]:
    return skills_from_dict(json.loads(text))


def skills_to_dict(skills: Sequence[Skill]) -> dict:
    out = {}
    for s in skills:
        out[s.name] = [
            [t.precondition.sorted(), [p.sorted() for p in t.postconditions]]
            for t in s.chain
        ]
    return out
