import math
from typing import NamedTuple, Tuple

import numpy as np

from sim.models import MAX_DELTA, SimAction, SimState, TaskConfig, TaskKind

__all__ = ("ExpertStep", "scripted_expert", "subgoal_label")

OPEN, CLOSE = -1.0, 1.0


class ExpertStep(NamedTuple):
    action: SimAction
    subgoal: str


def _move(state: SimState, goal: Tuple[float, float]) -> Tuple[float, float, float]:
    """Per-axis proportional step, clipped, and the distance left after it."""
    dx = float(np.clip(goal[0] - state.gripper[0], -MAX_DELTA, MAX_DELTA))
    dy = float(np.clip(goal[1] - state.gripper[1], -MAX_DELTA, MAX_DELTA))
    after = math.hypot(goal[0] - state.gripper[0] - dx, goal[1] - state.gripper[1] - dy)
    return dx, dy, after


def _carry(state: SimState, obj, goal, tolerance: float, subgoal_pick: str, subgoal_place: str):
    if not obj.held:
        dx, dy, after = _move(state, obj.pos)
        grip = CLOSE if after <= 0.5 * obj.radius else OPEN
        return ExpertStep(SimAction(dx, dy, grip), subgoal_pick)
    dx, dy, after = _move(state, goal)
    grip = OPEN if after <= 0.5 * tolerance else CLOSE
    return ExpertStep(SimAction(dx, dy, grip), subgoal_place)


def scripted_expert(state: SimState, task: TaskConfig) -> ExpertStep:
    if task.kind is TaskKind.REACH:
        target = state.targets[0]
        dx, dy, _after = _move(state, target.pos)
        return ExpertStep(SimAction(dx, dy, 0.0), f"move to the {target.id}")
    if task.kind is TaskKind.PICK_PLACE:
        obj, target = state.objects[0], state.targets[0]
        return _carry(
            state,
            obj,
            target.pos,
            target.radius,
            f"pick up the {obj.category}",
            f"place the {obj.category} on the {target.id}",
        )
    top, base = state.objects[0], state.objects[1]
    return _carry(
        state,
        top,
        base.pos,
        task.target_radius,
        f"pick up the {top.category}",
        f"stack the {top.category} on the {base.category}",
    )


def subgoal_label(state: SimState, task: TaskConfig) -> str:
    return scripted_expert(state, task).subgoal
