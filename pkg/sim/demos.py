from typing import List, Tuple

import numpy as np

from sim.env import is_success, reset, step
from sim.expert import scripted_expert
from sim.models import EpisodeRecord, TaskConfig
from sim.observations import ACTION_DIM, Observation, observe

__all__ = ("chunk_windows", "run_expert_episode")


def run_expert_episode(task: TaskConfig, rng: np.random.Generator) -> EpisodeRecord:
    state = reset(task, rng)
    record = EpisodeRecord(task.name, states=[state], subgoals=[])
    while not is_success(state, task) and record.steps_used < task.max_steps:
        expert = scripted_expert(state, task)
        state = step(state, expert.action)
        record.actions.append(expert.action.clipped())
        record.subgoals.append(expert.subgoal)
        record.states.append(state)
        record.steps_used += 1
    record.success = is_success(state, task)
    return record


def chunk_windows(
    record: EpisodeRecord, task: TaskConfig, horizon: int
) -> List[Tuple[Observation, np.ndarray]]:
    """
    One ``(observation, H x 3 chunk)`` pair per executed step. Chunks running
    past the end are padded with motionless actions that keep the last grip.
    """
    if not record.actions:
        return []
    actions = np.stack([a.as_array() for a in record.actions])
    pad = np.zeros((horizon, ACTION_DIM))
    pad[:, 2] = actions[-1, 2]
    padded = np.concatenate([actions, pad])
    return [
        (observe(record.states[t], task), padded[t : t + horizon].copy())
        for t in range(len(record.actions))
    ]
