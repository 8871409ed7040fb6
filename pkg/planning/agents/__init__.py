from abc import abstractmethod
from typing import Optional

import numpy as np
from django.conf import settings
from django.utils.module_loading import import_string

from planning.environments import BaseEnvironment
from planning.models import Action, TaskSpec

__all__ = ("BaseAgent", "get_agent")


class BaseAgent:
    def __init__(self, settings: Optional[dict] = None):
        self.settings = settings or {}

    @abstractmethod
    def act(self, env: BaseEnvironment, task: TaskSpec, rng: np.random.Generator) -> Action:
        raise NotImplementedError


def get_agent(name: str, **overrides) -> BaseAgent:
    """Agent from the ``PLANNING_AGENTS`` registry; ``None`` overrides are ignored."""
    agent = settings.PLANNING_AGENTS[name]
    agent_class = import_string(agent["class"])
    agent_settings = {**agent.get("settings", {})}
    agent_settings.update({k: v for k, v in overrides.items() if v is not None})
    return agent_class(agent_settings)
