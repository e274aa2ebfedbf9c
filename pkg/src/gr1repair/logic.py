"""Propositions, assignments, Boolean/next-state formulas, and reactive specs.

Formulas are plain immutable trees over a Slugs-style surface syntax
(!, &, |, ->, <->, trailing ' for the next-state operator).  Specifications
follow the assume/guarantee shape used by two-player reactive games:
initial, safety, and liveness conjuncts for both the environment and the
system.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    FormulaSyntaxError,
    NextInStateFormula,
    SpecValidationError,
    UnknownProposition,
    UntilNotSupported,
)

CONTROLLABLE = "controllable"
UNCONTROLLABLE = "uncontrollable"
OUTPUT = "output"
_KINDS = (CONTROLLABLE, UNCONTROLLABLE, OUTPUT)


@dataclass(frozen=True)
class Proposition:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SpecValidationError(
                f"proposition '{self.name}' has unknown kind '{self.kind}'"
            )

    @property
    def is_input(self) -> bool:
        return self.kind in (CONTROLLABLE, UNCONTROLLABLE)


@dataclass(frozen=True)
class Assignment:
    """A set of true proposition names; everything unlisted is false."""

    true_set: frozenset[str]

    def __init__(self, names: Iterable[str] = ()):
        object.__setattr__(self, "true_set", frozenset(names))

    def __contains__(self, name: str) -> bool:
        return name in self.true_set

    def __or__(self, other: "Assignment") -> "Assignment":
        return Assignment(self.true_set | other.true_set)

    def restrict(self, names: Iterable[str]) -> "Assignment":
        keep = set(names)
        return Assignment(n for n in self.true_set if n in keep)

    def sorted(self) -> list[str]:
        return sorted(self.true_set)


# ---------------------------------------------------------------------------
# Formula tree
# ---------------------------------------------------------------------------

class Formula:
    """Base class; subclasses are frozen dataclasses, safe to share."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    primed: bool = False


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    """Parsed for completeness; rejected by every game position."""

    left: Formula
    right: Formula


TRUE = TrueConst()
FALSE = FalseConst()


def conjoin(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def atoms(formula: Formula) -> Iterator[Atom]:
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            yield f
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, (And, Or, Implies, Iff, Until)):
            stack.append(f.left)
            stack.append(f.right)


def has_primed(formula: Formula) -> bool:
    return any(a.primed for a in atoms(formula))


def has_until(formula: Formula) -> bool:
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Until):
            return True
        if isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, (And, Or, Implies, Iff)):
            stack.append(f.left)
            stack.append(f.right)
    return False


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_state(formula: Formula, a: Assignment) -> bool:
    """Truth value of a next-free formula in a single state."""
    if isinstance(formula, Atom):
        if formula.primed:
            raise NextInStateFormula(
                f"next-state atom {formula.name}' in a state formula"
            )
        return formula.name in a
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, FalseConst):
        return False
    if isinstance(formula, Not):
        return not eval_state(formula.arg, a)
    if isinstance(formula, And):
        return eval_state(formula.left, a) and eval_state(formula.right, a)
    if isinstance(formula, Or):
        return eval_state(formula.left, a) or eval_state(formula.right, a)
    if isinstance(formula, Implies):
        return (not eval_state(formula.left, a)) or eval_state(formula.right, a)
    if isinstance(formula, Iff):
        return eval_state(formula.left, a) == eval_state(formula.right, a)
    if isinstance(formula, Until):
        raise UntilNotSupported("'U' has no single-state semantics here")
    raise TypeError(f"not a formula: {formula!r}")


def eval_transition(formula: Formula, current: Assignment, nxt: Assignment) -> bool:
    """Truth value over a step: plain atoms read `current`, primed read `nxt`."""
    if isinstance(formula, Atom):
        return formula.name in (nxt if formula.primed else current)
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, FalseConst):
        return False
    if isinstance(formula, Not):
        return not eval_transition(formula.arg, current, nxt)
    if isinstance(formula, And):
        return eval_transition(formula.left, current, nxt) and eval_transition(
            formula.right, current, nxt
        )
    if isinstance(formula, Or):
        return eval_transition(formula.left, current, nxt) or eval_transition(
            formula.right, current, nxt
        )
    if isinstance(formula, Implies):
        return (not eval_transition(formula.left, current, nxt)) or eval_transition(
            formula.right, current, nxt
        )
    if isinstance(formula, Iff):
        return eval_transition(formula.left, current, nxt) == eval_transition(
            formula.right, current, nxt
        )
    if isinstance(formula, Until):
        raise UntilNotSupported("'U' has no single-step semantics here")
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<iff><->)|(?P<implies>->)|(?P<and>&)|(?P<or>\|)|(?P<not>!)"
    r"|(?P<lpar>\()|(?P<rpar>\))|(?P<prime>')|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = pos + (len(text) - pos - len(rest))
            raise FormulaSyntaxError(f"unexpected character '{rest[0]}'", at)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, names: Optional[frozenset[str]]):
        self.tokens = tokens
        self.i = 0
        self.names = names

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind}, found '{tok[1]}'", tok[2])
        return tok

    # grammar: iff > implies > or > and > unary; ->, <-> right-associative
    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        if self.peek()[0] == "iff":
            self.advance()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek()[0] == "implies":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek()[0] == "or":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while self.peek()[0] == "and":
            self.advance()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "not":
            self.advance()
            return Not(self.parse_unary())
        if kind == "lpar":
            self.advance()
            inner = self.parse_until()
            self.expect("rpar")
            return self.maybe_prime(inner, pos)
        if kind == "ident":
            self.advance()
            if value == "TRUE":
                return TRUE
            if value == "FALSE":
                return FALSE
            if value == "U":
                raise FormulaSyntaxError("'U' needs a left operand", pos)
            primed = False
            if self.peek()[0] == "prime":
                self.advance()
                primed = True
            if self.names is not None and value not in self.names:
                raise UnknownProposition(value, pos)
            return Atom(value, primed)
        raise FormulaSyntaxError(f"expected a formula, found '{value or 'end'}'", pos)

    def parse_until(self) -> Formula:
        # 'U' binds loosest; only valid inside parentheses or at top level.
        left = self.parse_iff()
        while self.peek()[0] == "ident" and self.peek()[1] == "U":
            self.advance()
            left = Until(left, self.parse_iff())
        return left

    def maybe_prime(self, inner: Formula, pos: int) -> Formula:
        if self.peek()[0] == "prime":
            raise FormulaSyntaxError(
                "' applies to single propositions, not subformulas", self.peek()[2]
            )
        return inner


def parse_formula(text: str, propositions: Optional[Iterable[str]] = None) -> Formula:
    """Parse Slugs-style surface syntax; round-trips through print_formula."""
    names = None if propositions is None else frozenset(propositions)
    parser = _Parser(_tokenize(text), names)
    formula = parser.parse_until()
    end = parser.peek()
    if end[0] != "end":
        raise FormulaSyntaxError(f"trailing input '{end[1]}'", end[2])
    return formula


# ---------------------------------------------------------------------------
# Canonical printer (minimal parentheses)
# ---------------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Until: 2, Or: 3, And: 4, Not: 5}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 6)


def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name + ("'" if f.primed else "")
    if isinstance(f, TrueConst):
        return "TRUE"
    if isinstance(f, FalseConst):
        return "FALSE"
    if isinstance(f, Not):
        inner = print_formula(f.arg)
        if _prec(f.arg) < 5:
            inner = f"({inner})"
        return "!" + inner
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        own = _prec(f)
        left = print_formula(f.left)
        if _prec(f.left) < own:
            left = f"({left})"
        right = print_formula(f.right)
        if _prec(f.right) <= own:
            right = f"({right})"
        return left + op + right
    if isinstance(f, (Implies, Iff)):
        op = " -> " if isinstance(f, Implies) else " <-> "
        own = _prec(f)
        left = print_formula(f.left)
        if _prec(f.left) <= own:
            left = f"({left})"
        right = print_formula(f.right)
        if _prec(f.right) < own:
            right = f"({right})"
        return left + op + right
    if isinstance(f, Until):
        # Always fully parenthesized: 'U' only exists to be rejected later.
        left = print_formula(f.left)
        if _prec(f.left) <= 2:
            left = f"({left})"
        right = print_formula(f.right)
        if _prec(f.right) <= 2:
            right = f"({right})"
        return f"({left} U {right})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# GR(1)-shaped specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GR1Spec:
    """Assumption/guarantee spec: init, safety, and liveness on both sides.

    Validation enforces the structural rules the game relies on:
    unique propositions with a total kind partition, next-state atoms
    confined to env-safety (inputs only) and sys-safety, liveness and
    initial formulas next-free, and no 'U' anywhere.  Empty liveness
    lists are normalized to the trivially-true goal.
    """

    propositions: tuple[Proposition, ...]
    env_init: Formula = TRUE
    env_safety: tuple[Formula, ...] = ()
    env_liveness: tuple[Formula, ...] = ()
    sys_init: Formula = TRUE
    sys_safety: tuple[Formula, ...] = ()
    sys_liveness: tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "propositions", tuple(self.propositions))
        for name in ("env_safety", "env_liveness", "sys_safety", "sys_liveness"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.env_liveness:
            object.__setattr__(self, "env_liveness", (TRUE,))
        if not self.sys_liveness:
            object.__setattr__(self, "sys_liveness", (TRUE,))
        self._validate()

    def _validate(self):
        seen = set()
        for p in self.propositions:
            if p.name in seen:
                raise SpecValidationError(f"duplicate proposition '{p.name}'")
            seen.add(p.name)
        inputs = {p.name for p in self.propositions if p.is_input}

        def check(formula: Formula, where: str, primed_over: Optional[set] = None,
                  allow_primed: bool = True):
            if has_until(formula):
                raise UntilNotSupported(f"'U' in {where}: {print_formula(formula)}")
            for a in atoms(formula):
                if a.name not in seen:
                    raise UnknownProposition(a.name)
                if a.primed:
                    if not allow_primed:
                        raise SpecValidationError(
                            f"next-state atom {a.name}' not allowed in {where}"
                        )
                    if primed_over is not None and a.name not in primed_over:
                        raise SpecValidationError(
                            f"env-safety may only prime inputs, got {a.name}'"
                        )

        check(self.env_init, "env-init", allow_primed=False)
        check(self.sys_init, "sys-init", allow_primed=False)
        for f in self.env_safety:
            check(f, "env-safety", primed_over=inputs)
        for f in self.sys_safety:
            check(f, "sys-safety")
        for f in self.env_liveness:
            check(f, "env-liveness", allow_primed=False)
        for f in self.sys_liveness:
            check(f, "sys-liveness", allow_primed=False)

    # -- convenience views -------------------------------------------------
    @property
    def inputs(self) -> tuple[Proposition, ...]:
        return tuple(p for p in self.propositions if p.is_input)

    @property
    def outputs(self) -> tuple[Proposition, ...]:
        return tuple(p for p in self.propositions if p.kind == OUTPUT)

    @property
    def controllable_inputs(self) -> tuple[Proposition, ...]:
        return tuple(p for p in self.propositions if p.kind == CONTROLLABLE)

    def names(self, kind: Optional[str] = None) -> list[str]:
        if kind is None:
            return [p.name for p in self.propositions]
        return [p.name for p in self.propositions if p.kind == kind]

    def input_names(self) -> list[str]:
        return [p.name for p in self.inputs]

    def output_names(self) -> list[str]:
        return [p.name for p in self.outputs]


# ---------------------------------------------------------------------------
# JSON serialization (formulas as canonical strings)
# ---------------------------------------------------------------------------

def spec_to_dict(spec: GR1Spec) -> dict:
    return {
        "propositions": [{"name": p.name, "kind": p.kind} for p in spec.propositions],
        "env_init": print_formula(spec.env_init),
        "env_safety": [print_formula(f) for f in spec.env_safety],
        "env_liveness": [print_formula(f) for f in spec.env_liveness],
        "sys_init": print_formula(spec.sys_init),
        "sys_safety": [print_formula(f) for f in spec.sys_safety],
        "sys_liveness": [print_formula(f) for f in spec.sys_liveness],
    }


def spec_from_dict(data: Mapping) -> GR1Spec:
    props = tuple(
        Proposition(entry["name"], entry["kind"]) for entry in data["propositions"]
    )
    names = [p.name for p in props]

    def pf(text: str) -> Formula:
        return parse_formula(text, names)

    return GR1Spec(
        propositions=props,
        env_init=pf(data.get("env_init", "TRUE")),
        env_safety=tuple(pf(s) for s in data.get("env_safety", [])),
        env_liveness=tuple(pf(s) for s in data.get("env_liveness", [])),
        sys_init=pf(data.get("sys_init", "TRUE")),
        sys_safety=tuple(pf(s) for s in data.get("sys_safety", [])),
        sys_liveness=tuple(pf(s) for s in data.get("sys_liveness", [])),
    )


def spec_to_json(spec: GR1Spec, indent: int = 2) -> str:
    return json.dumps(spec_to_dict(spec), indent=indent)


def spec_from_json(text: str) -> GR1Spec:
    return spec_from_dict(json.loads(text))
