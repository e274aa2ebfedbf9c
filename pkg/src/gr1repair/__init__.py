"""Runtime repair of reactive robot controllers.

The package detects environment-assumption violations against an
assume/guarantee specification, relaxes the violated assumptions, verifies
LLM-proposed recovery skills by realizability checking, and turns failed
verifications into natural-language feedback from counterstrategy analysis.
"""
from .abstraction import (
    Abstraction,
    PropositionGroup,
    Skill,
    SkillTransition,
    compile_skills,
    is_sub_specification,
)
from .analysis import (
    Feedback,
    liveness_analysis,
    render_feedback,
    safety_analysis,
    strongly_connected_components,
)
from .llm import (
    HttpChatBackend,
    InformalizationExample,
    ReplayBackend,
    build_abstraction_inform_prompt,
    build_repair_prompt,
    build_strategy_inform_prompt,
    complete,
)
from .logic import (
    Assignment,
    Formula,
    GR1Spec,
    Proposition,
    eval_state,
    eval_transition,
    parse_formula,
    print_formula,
)
from .orchestrator import (
    RepairProblem,
    RepairResult,
    informalize,
    repair,
    verify_candidate,
)
from .skill_dsl import (
    SkillCandidateSet,
    SyntaxFinding,
    extract_json_block,
    parse_skills,
    typecheck_skills,
)
from .synthesis import (
    Counterstrategy,
    GameState,
    Strategy,
    check_realizability,
    extract_counterstrategy,
    extract_strategy,
    simulate_strategy,
)
from .violation import (
    Violation,
    apply_repair,
    detect_violation,
    relax_assumptions,
)

__version__ = "0.1.0"
