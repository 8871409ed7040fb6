from typing import Optional

import numpy as np

from planning.agents import BaseAgent
from planning.environments.kitchen import CONTAINERS, GRIPPER, ToyKitchen
from planning.models import Action, Fact, TaskSpec

__all__ = ("ScriptedExpert",)


class ScriptedExpert(BaseAgent):
    """
    Reactive planner for the toy kitchen: works on the first unmet goal fact
    and returns the next action towards it, recomputed from the live state.
    """

    def act(self, env: ToyKitchen, task: TaskSpec, rng: np.random.Generator) -> Action:
        for fact in task.goal:
            if not env.holds(fact):
                return self._towards(env, fact)
        return Action("navigate", (env.state.agent,))

    def _towards(self, env: ToyKitchen, fact: Fact) -> Action:
        state = env.state
        predicate, *args = fact
        if predicate == "at":
            obj, location = args
            if state.where[obj] != GRIPPER:
                return self._acquire(env, obj)
            return self._deliver(env, location) or Action("place", (obj, location))
        if predicate == "sliced":
            (obj,) = args
            if state.held != "knife":
                return self._acquire(env, "knife")
            return self._deliver(env, state.where[obj]) or Action("slice", (obj,))
        if predicate == "closed":
            (container,) = args
            if state.agent != container:
                return Action("navigate", (container,))
            return Action("close", (container,))
        raise ValueError(f"Unknown predicate {predicate!r}")

    def _deliver(self, env: ToyKitchen, location: str) -> Optional[Action]:
        """Navigate to and open ``location``; ``None`` once it is reachable."""
        state = env.state
        if state.agent != location:
            return Action("navigate", (location,))
        if location in CONTAINERS and location not in state.opened:
            return Action("open", (location,))
        return None

    def _acquire(self, env: ToyKitchen, obj: str) -> Action:
        state = env.state
        held = state.held
        if held is not None:
            # put down whatever is in the gripper where we stand
            return self._deliver(env, state.agent) or Action("place", (held, state.agent))
        return self._deliver(env, state.where[obj]) or Action("pick", (obj,))
