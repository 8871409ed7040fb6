from abc import abstractmethod
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings
from django.utils.module_loading import import_string

from planning.exceptions import UnknownTask
from planning.models import Action, Fact, TaskSpec

__all__ = ("BaseEnvironment", "get_environment")


class BaseEnvironment:
    """
    A symbolic task world. One instance per episode; ``reset`` installs a
    fresh state for the given task.
    """

    tasks: Dict[str, TaskSpec] = {}

    def __init__(self, settings: Optional[dict] = None):
        self.settings = settings or {}

    def get_task(self, name: str) -> TaskSpec:
        try:
            return self.tasks[name]
        except KeyError:
            raise UnknownTask(f"Unknown task {name!r}, expected one of {sorted(self.tasks)}")

    @abstractmethod
    def reset(self, task: TaskSpec, rng: np.random.Generator):
        raise NotImplementedError

    @abstractmethod
    def step(self, action: Action) -> Tuple[str, bool]:
        """Apply ``action``; returns ``(observation_summary, success)``."""
        raise NotImplementedError

    @abstractmethod
    def holds(self, fact: Fact) -> bool:
        raise NotImplementedError

    @abstractmethod
    def candidate_actions(self, task: TaskSpec) -> List[Action]:
        """Every syntactically valid action for the task, legal in this state or not."""
        raise NotImplementedError

    def is_goal(self, task: TaskSpec) -> bool:
        return all(self.holds(fact) for fact in task.goal)


def get_environment(name: str) -> BaseEnvironment:
    environment = settings.PLANNING_ENVIRONMENTS[name]
    environment_class = import_string(environment["class"])
    return environment_class(environment.get("settings", {}))
