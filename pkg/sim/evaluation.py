"""
Closed-loop evaluation: query a chunk, execute its first ``execute`` actions,
re-observe, until success or the step budget runs out.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Protocol

import numpy as np

from sim.env import is_success, reset, step
from sim.expert import scripted_expert
from sim.models import MAX_DELTA, EpisodeRecord, SimAction, SimState, TaskConfig
from sim.observations import Observation, observe
from vlaforge.parallel import ordered_map
from vlaforge.seeding import SeedScheme

__all__ = ("EvalResult", "ExpertPolicy", "Policy", "RandomPolicy", "eval_policy", "run_episode")

logger = logging.getLogger(__name__)


class Policy(Protocol):
    horizon: int

    def predict_chunk(
        self, observation: Observation, state: SimState, task: TaskConfig, rng: np.random.Generator
    ) -> np.ndarray:
        ...


class ExpertPolicy:
    """Scripted expert behind the chunk interface, planning on its own copy of the simulator."""

    def __init__(self, horizon: int = 4):
        self.horizon = horizon

    def predict_chunk(self, observation, state, task, rng):
        chunk = []
        for _ in range(self.horizon):
            action = scripted_expert(state, task).action
            chunk.append(action.as_array())
            state = step(state, action)
        return np.stack(chunk)


class RandomPolicy:
    def __init__(self, horizon: int = 4):
        self.horizon = horizon

    def predict_chunk(self, observation, state, task, rng):
        chunk = rng.uniform(-1.0, 1.0, size=(self.horizon, 3))
        chunk[:, :2] *= MAX_DELTA
        return chunk


@dataclass
class EvalResult:
    task: str
    episodes: int
    successes: int
    records: List[EpisodeRecord] = field(default_factory=list)
    counters: Counter = field(default_factory=Counter)

    @property
    def success_rate(self) -> float:
        return self.successes / self.episodes

    @property
    def success_set(self) -> List[int]:
        return [i for i, r in enumerate(self.records) if r.success]


def run_episode(
    policy: Policy,
    task: TaskConfig,
    episode_rng: np.random.Generator,
    policy_rng: np.random.Generator,
    execute: int = 2,
):
    state = reset(task, episode_rng)
    record = EpisodeRecord(task.name, states=[state])
    counters = Counter()
    while not is_success(state, task) and record.steps_used < task.max_steps:
        chunk = policy.predict_chunk(observe(state, task), state, task, policy_rng)
        counters["queries"] += 1
        for row in chunk[:execute]:
            action = SimAction.from_array(row).clipped()
            state = step(state, action)
            record.actions.append(action)
            record.states.append(state)
            record.steps_used += 1
            counters["actions"] += 1
            if is_success(state, task) or record.steps_used >= task.max_steps:
                break
    record.success = is_success(state, task)
    return record, counters


def eval_policy(
    policy: Policy,
    task: TaskConfig,
    episodes: int,
    scheme: SeedScheme,
    execute: int = 2,
    jobs: int = 1,
) -> EvalResult:
    """
    Initial states depend only on ``(scheme, task, episode)``, so every policy
    is scored on the same episodes.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")

    def one(index):
        return run_episode(
            policy,
            task,
            scheme.rng(f"episode:{task.name}", index),
            scheme.rng(f"policy:{task.name}", index),
            execute,
        )

    result = EvalResult(task.name, episodes, 0)
    for record, counters in ordered_map(one, range(episodes), jobs):
        result.records.append(record)
        result.counters.update(counters)
        result.successes += int(record.success)
    logger.info(f"{task.name}: {result.successes}/{episodes} successful episodes")
    return result
