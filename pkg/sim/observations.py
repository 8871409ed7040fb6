"""Ground-truth feature vectors fed to policies in place of rendered pixels."""
from dataclasses import dataclass

import numpy as np

from sim.models import SimState, TaskConfig, TaskKind

__all__ = ("CONTEXT_DIM", "STATE_DIM", "ACTION_DIM", "Observation", "observe")

MAX_OBJECTS = 2
MAX_TARGETS = 1
# task one-hot, (x, y, held) per object slot, (x, y) per target slot
CONTEXT_DIM = len(TaskKind) + 3 * MAX_OBJECTS + 2 * MAX_TARGETS
# gripper (x, y) and grip state in {-1, +1}
STATE_DIM = 3
ACTION_DIM = 3


@dataclass(frozen=True)
class Observation:
    context: np.ndarray
    state: np.ndarray


def observe(state: SimState, task: TaskConfig) -> Observation:
    context = np.zeros(CONTEXT_DIM, dtype=np.float64)
    kinds = list(TaskKind)
    context[kinds.index(task.kind)] = 1.0
    offset = len(kinds)
    for slot, obj in enumerate(state.objects[:MAX_OBJECTS]):
        context[offset + 3 * slot : offset + 3 * slot + 3] = (*obj.pos, float(obj.held))
    offset += 3 * MAX_OBJECTS
    for slot, target in enumerate(state.targets[:MAX_TARGETS]):
        context[offset + 2 * slot : offset + 2 * slot + 2] = target.pos
    robot = np.array([*state.gripper, 1.0 if state.grip_closed else -1.0], dtype=np.float64)
    return Observation(context, robot)
