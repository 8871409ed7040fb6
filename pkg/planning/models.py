import re
from dataclasses import dataclass
from typing import Tuple

from planning.exceptions import MalformedTrace

__all__ = ("Action", "Fact", "PlanningSample", "Step", "TaskSpec", "Trajectory")

Fact = Tuple[str, ...]

ACTION_PATTERN = re.compile(r"^(?P<name>[a-z_]+)\((?P<args>[^()]*)\)$")


def fact_text(fact: Fact) -> str:
    return f"{fact[0]}({', '.join(fact[1:])})"


@dataclass(frozen=True)
class Action:
    name: str
    args: Tuple[str, ...] = ()

    @property
    def text(self) -> str:
        return f"{self.name}({', '.join(self.args)})"

    @classmethod
    def parse(cls, text: str) -> "Action":
        match = ACTION_PATTERN.match(text.strip())
        if match is None:
            raise MalformedTrace(f"Not an action: {text!r}")
        args = tuple(a.strip() for a in match["args"].split(",") if a.strip())
        return cls(match["name"], args)


@dataclass(frozen=True)
class TaskSpec:
    name: str
    instruction: str
    allowed_actions: Tuple[str, ...]
    goal: Tuple[Fact, ...]
    max_steps: int

    def __post_init__(self):
        if not self.allowed_actions:
            raise ValueError(f"Task {self.name} allows no actions")
        if self.max_steps < 1:
            raise ValueError(f"Task {self.name} needs max_steps >= 1")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "instruction": self.instruction,
            "allowed_actions": list(self.allowed_actions),
            "goal": [fact_text(fact) for fact in self.goal],
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class Step:
    action: Action
    observation_summary: str
    success: bool


@dataclass(frozen=True)
class Trajectory:
    task: TaskSpec
    steps: Tuple[Step, ...]
    final_success: bool

    def to_json(self) -> dict:
        return {
            "task": self.task.name,
            "instruction": self.task.instruction,
            "final_success": self.final_success,
            "steps": [
                {
                    "action": step.action.text,
                    "observation": step.observation_summary,
                    "success": step.success,
                }
                for step in self.steps
            ],
        }


@dataclass(frozen=True)
class PlanningSample:
    task: str
    instruction: str
    step: int
    reasoning: str
    action: str
    observation: str
    success: bool
    text: str
