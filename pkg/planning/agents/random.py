import numpy as np

from planning.agents import BaseAgent
from planning.agents.expert import ScriptedExpert
from planning.environments import BaseEnvironment
from planning.models import Action, TaskSpec

__all__ = ("EpsilonRandomAgent",)


class EpsilonRandomAgent(BaseAgent):
    """Expert with probability ``1 - epsilon``, otherwise a uniform candidate action."""

    def __init__(self, settings=None):
        super().__init__(settings)
        self.epsilon = float(self.settings.get("epsilon", 0.5))
        self.expert = ScriptedExpert()

    def act(self, env: BaseEnvironment, task: TaskSpec, rng: np.random.Generator) -> Action:
        if rng.random() < self.epsilon:
            candidates = env.candidate_actions(task)
            return candidates[int(rng.integers(len(candidates)))]
        return self.expert.act(env, task, rng)
