import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from gr1repair.abstraction import (
    abstraction_from_json,
    compile_skills,
    skills_from_json,
)
from gr1repair.llm import InformalizationExample
from gr1repair.logic import spec_from_json
from gr1repair.orchestrator import RepairProblem, clear_informalization_cache
from gr1repair.violation import Violation

FIXTURES = pathlib.Path(__file__).parent.parent / "src" / "gr1repair" / "fixtures"
GOLDENS = pathlib.Path(__file__).parent / "goldens"


@pytest.fixture(autouse=True)
def _fresh_inform_cache():
    clear_informalization_cache()
    yield
    clear_informalization_cache()


class World:
    def __init__(self, name):
        self.root = FIXTURES / name
        self.abstraction = abstraction_from_json(
            (self.root / "abstraction.json").read_text()
        )
        self.skills = skills_from_json((self.root / "skills.json").read_text())
        self.base_spec = spec_from_json((self.root / "base_spec.json").read_text())
        task = self.root / "task_spec.json"
        self.task_spec = spec_from_json(task.read_text()) if task.exists() else None
        self.full_spec = compile_skills(self.abstraction, self.skills, self.base_spec)

    def violation(self, name) -> Violation:
        return Violation.from_json(
            (self.root / "violations" / f"{name}.json").read_text()
        )

    def candidate(self, name) -> str:
        return (self.root / "candidates" / f"{name}.json").read_text()


@pytest.fixture(scope="session")
def factory():
    return World("factory")


@pytest.fixture(scope="session")
def mini_world():
    return World("mini_world")


@pytest.fixture(scope="session")
def swarm_world():
    return World("swarm_world")


@pytest.fixture(scope="session")
def mini_example():
    return InformalizationExample.from_dict(
        json.loads((FIXTURES / "mini_world" / "informalization_example.json").read_text())
    )


@pytest.fixture()
def factory_problem(factory, mini_example):
    return RepairProblem(
        abstraction=factory.abstraction,
        skills=tuple(factory.skills),
        task_spec=factory.task_spec,
        full_spec=factory.full_spec,
        violation=factory.violation("cup"),
        examples=(mini_example,),
    )


@pytest.fixture(scope="session")
def factory_informalization(factory):
    inform = factory.root / "informalization"
    return (
        (inform / "abstraction_description.txt").read_text(),
        (inform / "behavior.txt").read_text(),
    )


@pytest.fixture(scope="session")
def cup_replay(factory):
    return (factory.root / "replay" / "cup_session.json").read_text()
