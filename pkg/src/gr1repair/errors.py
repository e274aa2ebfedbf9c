"""Exception types shared across the package."""


class Gr1RepairError(Exception):
    """Base class for all package errors."""


class FormulaSyntaxError(Gr1RepairError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownProposition(Gr1RepairError):
    def __init__(self, name: str, position: int = -1):
        super().__init__(f"unknown proposition '{name}'")
        self.name = name
        self.position = position


class NextInStateFormula(Gr1RepairError):
    """A next-state atom appeared where only state formulas are allowed."""


class UntilNotSupported(Gr1RepairError):
    """'U' parses, but no reactive-game position accepts it."""


class SpecValidationError(Gr1RepairError):
    """A specification breaks a structural invariant."""


class DuplicateSkillName(Gr1RepairError):
    pass


class IncompleteConditionState(Gr1RepairError):
    def __init__(self, skill: str, missing: str):
        super().__init__(
            f"skill '{skill}' has a condition that does not determine '{missing}'"
        )
        self.skill = skill
        self.missing = missing


class StateSpaceTooLarge(Gr1RepairError):
    def __init__(self, bound: int, proposition_count: int):
        super().__init__(
            f"explicit game exceeds the configured bound of {bound} states "
            f"({proposition_count} propositions)"
        )
        self.bound = bound
        self.proposition_count = proposition_count


class NotRealizable(Gr1RepairError):
    """Strategy extraction was asked for an unrealizable specification."""


class SpecRealizable(Gr1RepairError):
    """Counterstrategy extraction was asked for a realizable specification."""


class NoViolation(Gr1RepairError):
    """Relaxation was asked for a transition that violates nothing."""


class NoCodeBlockFound(Gr1RepairError):
    """An LLM response contained no JSON code block."""


class MissingGrounding(Gr1RepairError):
    def __init__(self, name: str):
        super().__init__(f"input proposition '{name}' has no grounding description")
        self.name = name


class BackendError(Gr1RepairError):
    """Base class for LLM backend failures."""


class TransportError(BackendError):
    pass


class BackendTimeout(TransportError):
    pass


class ReplayExhausted(BackendError):
    pass
