"""
Planar tabletop simulator. ``step`` is a pure function of ``(state, action)``:
the gripper moves by the clipped deltas first, then the grip command applies.
"""
import logging
import math
from typing import List

import numpy as np

from sim.exceptions import InvalidState
from sim.models import SimAction, SimObject, SimState, Target, TaskConfig, TaskKind

__all__ = ("is_success", "reset", "step")

logger = logging.getLogger(__name__)

MARGIN = 0.1
MIN_SEPARATION = 0.15


def _distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def step(state: SimState, action: SimAction) -> SimState:
    action = action.clipped()
    x = min(max(state.gripper[0] + action.dx, 0.0), 1.0)
    y = min(max(state.gripper[1] + action.dy, 0.0), 1.0)
    gripper = (x, y)
    grip_closed = state.grip_closed
    held_id = state.held.id if state.held else None

    if action.grip > 0 and held_id is None:
        grip_closed = True
        in_reach = [o for o in state.objects if _distance(o.pos, gripper) <= o.radius]
        if in_reach:
            held_id = min(in_reach, key=lambda o: (_distance(o.pos, gripper), o.id)).id
    elif action.grip < 0:
        grip_closed = False
        held_id = None

    objects = [
        SimObject(o.id, o.category, gripper if o.id == held_id else o.pos, o.radius, o.id == held_id)
        for o in state.objects
    ]
    return SimState(gripper, grip_closed, tuple(objects), state.targets)


def is_success(state: SimState, task: TaskConfig) -> bool:
    if task.kind is TaskKind.REACH:
        target = state.targets[0]
        return _distance(state.gripper, target.pos) <= target.radius
    if task.kind is TaskKind.PICK_PLACE:
        obj, target = state.objects[0], state.targets[0]
        return not obj.held and _distance(obj.pos, target.pos) <= target.radius
    top, base = state.objects[0], state.objects[1]
    return (
        not top.held
        and not base.held
        and _distance(top.pos, base.pos) <= task.target_radius
    )


def _spread(rng: np.random.Generator, count: int) -> List[tuple]:
    for _attempt in range(1000):
        points = [tuple(float(v) for v in rng.uniform(MARGIN, 1 - MARGIN, size=2)) for _ in range(count)]
        if all(
            _distance(a, b) >= MIN_SEPARATION
            for i, a in enumerate(points)
            for b in points[i + 1 :]
        ):
            return points
    raise InvalidState(f"Could not place {count} entities apart")


def reset(task: TaskConfig, rng: np.random.Generator) -> SimState:
    has_target = task.kind is not TaskKind.STACK
    positions = _spread(rng, task.objects + int(has_target))
    categories = list(task.categories)
    objects = []
    for index in range(task.objects):
        if task.kind is TaskKind.STACK:
            category = categories[index]
        else:
            category = categories[int(rng.integers(len(categories)))]
        objects.append(SimObject(f"obj{index}", category, positions[index], task.object_radius))
    targets = ()
    if has_target:
        targets = (Target(task.target_name, positions[-1], task.target_radius),)
    gripper = tuple(float(v) for v in rng.uniform(MARGIN, 1 - MARGIN, size=2))
    return SimState(gripper, False, tuple(objects), targets)
