import json

from click.testing import CliRunner

from gr1repair.cli import main

from conftest import FIXTURES

FACTORY = FIXTURES / "factory"


def run(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def factory_args(tmp_path, fmt="text", violation=None):
    args = [
        "--abstraction", str(FACTORY / "abstraction.json"),
        "--skills", str(FACTORY / "skills.json"),
        "--spec", str(FACTORY / "base_spec.json"),
        "--task", str(FACTORY / "task_spec.json"),
        "--out", str(tmp_path / "out"),
        "--format", fmt,
    ]
    if violation:
        args += ["--violation", str(FACTORY / "violations" / f"{violation}.json")]
    return args


# ---------------------------------------------------------------------------
# synthesize
# ---------------------------------------------------------------------------

def test_synthesize_factory_realizable(tmp_path):
    result = run(["synthesize"] + factory_args(tmp_path))
    assert result.exit_code == 0
    assert "Realizable" in result.output
    strategy = json.loads((tmp_path / "out" / "strategy.json").read_text())
    assert strategy["nodes"]


def test_synthesize_relaxed_writes_counterstrategy(tmp_path):
    result = run(["synthesize"] + factory_args(tmp_path, violation="cup"))
    assert result.exit_code == 0
    assert "Unrealizable" in result.output
    cs = json.loads((tmp_path / "out" / "counterstrategy.json").read_text())
    assert cs["nodes"]


def test_synthesize_unrealizable_goal(tmp_path):
    spec = {
        "propositions": [
            {"name": "x", "kind": "uncontrollable"},
            {"name": "y", "kind": "output"},
        ],
        "sys_liveness": ["FALSE"],
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    abstraction = {
        "propositions": [{"name": "x", "kind": "uncontrollable"}],
        "grounding": {"x": "an input"},
        "groups": [],
    }
    abs_path = tmp_path / "abstraction.json"
    abs_path.write_text(json.dumps(abstraction))
    result = run([
        "synthesize", "--abstraction", str(abs_path), "--spec", str(spec_path),
        "--out", str(tmp_path / "out"),
    ])
    assert result.exit_code == 0
    assert "Unrealizable" in result.output
    assert (tmp_path / "out" / "counterstrategy.json").exists()


def test_synthesize_respects_state_bound(tmp_path):
    result = CliRunner().invoke(
        main, ["synthesize"] + factory_args(tmp_path) + ["--state-bound", "3"]
    )
    assert result.exit_code == 4


def test_synthesize_is_idempotent(tmp_path):
    run(["synthesize"] + factory_args(tmp_path))
    first = (tmp_path / "out" / "strategy.json").read_text()
    run(["synthesize"] + factory_args(tmp_path))
    assert (tmp_path / "out" / "strategy.json").read_text() == first


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_recovery_candidate(tmp_path):
    result = run(
        ["verify"] + factory_args(tmp_path, violation="cup")
        + [str(FACTORY / "candidates" / "y_new.json")]
    )
    assert result.exit_code == 0
    assert "REPAIRED" in result.output


def test_verify_unsafe_candidate_prints_safety_feedback(tmp_path):
    result = run(
        ["verify"] + factory_args(tmp_path, violation="cup")
        + [str(FACTORY / "candidates" / "unsafe.json")]
    )
    assert result.exit_code == 3
    assert "violates the hard constraints !(p_base_x3' & p_cone_x3')" in result.output


def test_verify_empty_candidate_prints_liveness_feedback(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    result = run(
        ["verify"] + factory_args(tmp_path, violation="cup") + [str(empty)]
    )
    assert result.exit_code == 3
    assert "cannot satisfy liveness goals ( empty -> p_cup_t2 )" in result.output


def test_verify_syntax_failure_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"new_skill_0": [[["p_base_x2"], []]]}')
    result = run(
        ["verify"] + factory_args(tmp_path, violation="cup") + [str(bad)]
    )
    assert result.exit_code == 2
    assert "SYNTAX FAILURE" in result.output


def test_verify_json_and_text_carry_identical_content(tmp_path):
    target = str(FACTORY / "candidates" / "unsafe.json")
    text = run(["verify"] + factory_args(tmp_path, violation="cup") + [target])
    as_json = run(
        ["verify"] + factory_args(tmp_path, fmt="json", violation="cup") + [target]
    )
    payload = json.loads(as_json.output)
    assert payload["verdict"] == "unrealizable"
    for line in payload["feedback"].splitlines():
        assert line in text.output


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_relaxed_counterstrategy(tmp_path):
    run(["synthesize"] + factory_args(tmp_path, violation="cup"))
    result = run(
        ["analyze"] + factory_args(tmp_path, violation="cup")
        + [str(tmp_path / "out" / "counterstrategy.json")]
    )
    assert result.exit_code == 0
    assert "cannot satisfy liveness goals ( empty -> p_cup_t2 )" in result.output


def test_analyze_dag_automaton_has_no_findings(tmp_path):
    automaton = {
        "variables": ["empty", "pick_cup_t2"],
        "input_variables": ["empty"],
        "initial": [0],
        "nodes": {
            "0": {"rank": 1, "state": [0, 0], "trans": [1]},
            "1": {"rank": 1, "state": [1, 0], "trans": []},
        },
    }
    # node 1 is a leaf without transitions: trivially excluded, not a trap
    path = tmp_path / "dag.json"
    path.write_text(json.dumps(automaton))
    result = run(["analyze"] + factory_args(tmp_path) + [str(path)])
    assert result.exit_code == 0
    assert "no findings" in result.output


def test_analyze_rejects_garbage(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{]")
    result = CliRunner().invoke(
        main, ["analyze"] + factory_args(tmp_path) + [str(path)]
    )
    assert result.exit_code != 0


# ---------------------------------------------------------------------------
# repair
# ---------------------------------------------------------------------------

def repair_args(tmp_path, replay="cup_session"):
    return (
        ["repair"] + factory_args(tmp_path, violation="cup") + [
            "--backend", "replay",
            "--replay-file", str(FACTORY / "replay" / f"{replay}.json"),
            "--inform-dir", str(FACTORY / "informalization"),
        ]
    )


def test_repair_scripted_session(tmp_path):
    result = run(repair_args(tmp_path))
    assert result.exit_code == 0
    assert "outcome: repaired" in result.output
    records = [
        json.loads(line)
        for line in (tmp_path / "out" / "transcript.jsonl").read_text().splitlines()
    ]
    assert len(records) == 4
    assert records[3]["verdict"] == "repaired"
    for record in records:
        assert "timings" in record and "llm" in record["timings"]
    assert (tmp_path / "out" / "repaired_spec.json").exists()


def test_repair_exhausted_exit_code(tmp_path):
    result = CliRunner().invoke(main, repair_args(tmp_path, replay="hopeless"))
    assert result.exit_code == 5
    records = (tmp_path / "out" / "transcript.jsonl").read_text().splitlines()
    assert len(records) == 5


def test_repair_requires_violation(tmp_path):
    result = CliRunner().invoke(
        main,
        ["repair"] + factory_args(tmp_path) + [
            "--backend", "replay",
            "--replay-file", str(FACTORY / "replay" / "cup_session.json"),
        ],
    )
    assert result.exit_code != 0
    assert "violation" in result.output
