import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gr1repair.errors import NoCodeBlockFound
from gr1repair.skill_dsl import (
    SkillCandidateSet,
    extract_json_block,
    parse_skills,
    typecheck_skills,
)


# ---------------------------------------------------------------------------
# extract_json_block
# ---------------------------------------------------------------------------

def test_extracts_block_from_replay_response(factory):
    responses = json.loads(
        (factory.root / "replay" / "cup_session.json").read_text()
    )["responses"]
    block = extract_json_block(responses[1])
    data = json.loads(block)
    assert list(data) == ["new_skill_0"]


def test_bare_object_passes_through():
    assert extract_json_block("{}") == "{}"


def test_two_fenced_blocks_takes_the_last():
    text = (
        "First try:\n```JSON\n{\"new_skill_0\": []}\n```\n"
        "Final answer:\n```json\n{\"new_skill_1\": []}\n```\n"
    )
    assert json.loads(extract_json_block(text)) == {"new_skill_1": []}


def test_no_block_raises():
    with pytest.raises(NoCodeBlockFound):
        extract_json_block("I am not sure how to help with that.")


# ---------------------------------------------------------------------------
# parse_skills
# ---------------------------------------------------------------------------

def test_parse_inapplicable_candidate(factory):
    parsed = parse_skills(factory.candidate("unlive"))
    assert isinstance(parsed, SkillCandidateSet)
    assert parsed.names() == ["new_skill_0"]
    (name, chain), = parsed.chains
    assert len(chain) == 1


def test_parse_empty_object_is_empty_candidate_set():
    parsed = parse_skills("{}")
    assert isinstance(parsed, SkillCandidateSet)
    assert len(parsed) == 0


def test_empty_postcondition_list_cites_grammar_rule():
    findings = parse_skills('{"new_skill_0": [[["p_base_x2"], []]]}')
    assert isinstance(findings, list)
    assert any(f.rule == "<postcondition>+" for f in findings)


def test_bad_name_pattern():
    findings = parse_skills('{"skill_a": [[["p"], [["p"]]]]}')
    assert any("does not match the new_skill_<k> naming pattern" in f.message
               for f in findings)


def test_invalid_json_single_top_level_finding():
    findings = parse_skills("{ not json !")
    assert len(findings) == 1 and findings[0].path == "$"


@settings(max_examples=120)
@given(st.text(max_size=60))
def test_parse_total_on_arbitrary_text(text):
    result = parse_skills(text)
    assert isinstance(result, (SkillCandidateSet, list))


@settings(max_examples=60)
@given(st.recursive(
    st.one_of(st.none(), st.booleans(), st.integers(), st.text(max_size=6)),
    lambda sub: st.one_of(
        st.lists(sub, max_size=3), st.dictionaries(st.text(max_size=8), sub, max_size=3)
    ),
    max_leaves=10,
))
def test_parse_total_on_arbitrary_json(value):
    result = parse_skills(json.dumps(value))
    assert isinstance(result, (SkillCandidateSet, list))


# ---------------------------------------------------------------------------
# typecheck_skills
# ---------------------------------------------------------------------------

def _typecheck(factory, payload):
    parsed = parse_skills(json.dumps(payload))
    assert isinstance(parsed, SkillCandidateSet)
    return typecheck_skills(parsed, factory.abstraction, factory.skills)


def test_uncontrollable_in_precondition_verbatim_message(factory):
    findings = _typecheck(factory, {
        "new_skill_0": [[["empty", "p_base_x2", "p_cup_ee"],
                         [["p_base_x4", "p_cup_ee"]]]],
    })
    assert any(
        f.message == "empty in the precondition of new_skill_0 is not a "
                     "controllable input."
        for f in findings
    )


def test_unknown_identifier_is_a_distinct_finding(factory):
    findings = _typecheck(factory, {
        "new_skill_0": [[["p_base_x9", "p_cup_ee"], [["p_base_x4", "p_cup_ee"]]]],
    })
    assert any(
        f.message == "p_base_x9 in the precondition of new_skill_0 is not a "
                     "declared proposition."
        for f in findings
    )


def test_recovery_candidate_accepted(factory):
    skills = _typecheck(factory, json.loads(factory.candidate("y_new")))
    assert [s.name for s in skills] == ["new_skill_0"]
    assert len(skills[0].chain) == 2


def test_duplicate_of_original_skill_rejected(factory):
    findings = _typecheck(factory, {
        "new_skill_0": [[["p_base_x4", "p_cup_t2"], [["p_base_x4", "p_cup_ee"]]]],
    })
    assert any(
        f.message == "new_skill_0 duplicates existing skill pick_cup_t2."
        for f in findings
    )


def test_duplicate_within_candidate_set_rejected(factory):
    chain = [[["p_base_x2", "p_cup_ee"], [["p_base_x4", "p_cup_ee"]]]]
    findings = _typecheck(factory, {"new_skill_0": chain, "new_skill_1": chain})
    assert any(
        f.message == "new_skill_1 duplicates existing skill new_skill_0."
        for f in findings
    )


def test_incomplete_condition_names_the_missing_group(factory):
    findings = _typecheck(factory, {
        "new_skill_0": [[["p_base_x2", "p_cup_ee"], [["p_base_x4"]]]],
    })
    assert any(
        f.message == "new_skill_0 postcondition is not a complete controllable "
                     "input state: missing cup."
        for f in findings
    )


def test_conflicting_group_values_rejected(factory):
    findings = _typecheck(factory, {
        "new_skill_0": [[["p_base_x2", "p_base_x3", "p_cup_ee"],
                         [["p_base_x4", "p_cup_ee"]]]],
    })
    assert any("lists conflicting propositions" in f.message for f in findings)


def test_findings_are_stable(factory):
    payload = {
        "new_skill_1": [[["empty"], [["p_base_x9"]]]],
        "new_skill_0": [[["p_stone_t3"], [["p_base_x0"]]]],
    }
    one = _typecheck(factory, payload)
    two = _typecheck(factory, payload)
    assert [f.message for f in one] == [f.message for f in two]
    keys = [(f.skill, f.path) for f in one]
    assert keys == sorted(keys)
