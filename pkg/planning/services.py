import logging
import re
from typing import Iterable, List

import numpy as np

from planning.agents import BaseAgent
from planning.environments import BaseEnvironment
from planning.exceptions import MalformedTrace, RejectedFailedTrajectory, UnsupportedAction
from planning.models import Action, PlanningSample, Step, TaskSpec, Trajectory

__all__ = (
    "filter_successful",
    "parse_planning_text",
    "reasoning_for",
    "render_step",
    "rollout",
    "to_planning_samples",
)

logger = logging.getLogger(__name__)

REASONING_TEMPLATES = {
    "navigate": "I need to go to the {0}.",
    "open": "The {0} is closed, so I should open it.",
    "close": "I should close the {0}.",
    "pick": "I should pick up the {0}.",
    "place": "I should put the {0} at the {1}.",
    "slice": "With the knife in hand I can slice the {0}.",
}

STEP_PATTERN = re.compile(
    r"^Reasoning-step-(?P<index>\d+): (?P<reasoning>.*?) "
    r"Action: (?P<action>[a-z_]+\([^()]*\))\. "
    r"Observation: (?P<observation>.*) "
    r"Success: (?P<success>true|false)\.$"
)


def rollout(
    env: BaseEnvironment, agent: BaseAgent, task: TaskSpec, rng: np.random.Generator
) -> Trajectory:
    env.reset(task, rng)
    steps = []
    while not env.is_goal(task) and len(steps) < task.max_steps:
        action = agent.act(env, task, rng)
        if action.name not in task.allowed_actions:
            raise UnsupportedAction(f"Task {task.name} does not allow {action.text}")
        observation, success = env.step(action)
        steps.append(Step(action, observation, success))
    final_success = env.is_goal(task)
    logger.debug(f"Rolled out {task.name}: {len(steps)} steps, success={final_success}")
    return Trajectory(task, tuple(steps), final_success)


def filter_successful(trajectories: Iterable[Trajectory]) -> List[Trajectory]:
    return [trajectory for trajectory in trajectories if trajectory.final_success]


def reasoning_for(action: Action) -> str:
    template = REASONING_TEMPLATES.get(action.name, "I will try {name}.")
    return template.format(*action.args, name=action.name)


def render_step(index: int, step: Step) -> str:
    success = "true" if step.success else "false"
    return (
        f"Reasoning-step-{index}: {reasoning_for(step.action)} "
        f"Action: {step.action.text}. "
        f"Observation: {step.observation_summary} "
        f"Success: {success}."
    )


def to_planning_samples(trajectory: Trajectory) -> List[PlanningSample]:
    if not trajectory.final_success:
        raise RejectedFailedTrajectory(
            f"Trajectory for {trajectory.task.name} did not reach its goal"
        )
    return [
        PlanningSample(
            task=trajectory.task.name,
            instruction=trajectory.task.instruction,
            step=index,
            reasoning=reasoning_for(step.action),
            action=step.action.text,
            observation=step.observation_summary,
            success=step.success,
            text=render_step(index, step),
        )
        for index, step in enumerate(trajectory.steps, start=1)
    ]


def parse_planning_text(text: str) -> List[Step]:
    """Inverse of joining ``render_step`` lines with newlines."""
    steps = []
    for expected, line in enumerate(filter(None, text.splitlines()), start=1):
        match = STEP_PATTERN.match(line)
        if match is None:
            raise MalformedTrace(f"Line {expected} is not a reasoning step: {line!r}")
        if int(match["index"]) != expected:
            raise MalformedTrace(f"Expected step {expected}, found {match['index']}")
        steps.append(
            Step(
                action=Action.parse(match["action"]),
                observation_summary=match["observation"],
                success=match["success"] == "true",
            )
        )
    return steps
