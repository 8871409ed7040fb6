import logging
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

import numpy as np

from planning.environments import BaseEnvironment
from planning.exceptions import UnsupportedAction
from planning.models import Action, Fact, TaskSpec

__all__ = ("KitchenState", "ToyKitchen")

logger = logging.getLogger(__name__)

GRIPPER = "gripper"
SURFACES = ("counter", "table", "sink")
CONTAINERS = ("fridge", "drawer")
LOCATIONS = SURFACES + CONTAINERS
MOVABLE = ("apple", "bread", "mug", "plate")
SLICEABLE = ("apple", "bread", "tomato")
OBJECTS = MOVABLE + ("knife", "tomato")
ARITY = {"navigate": 1, "open": 1, "close": 1, "pick": 1, "place": 2, "slice": 1}
ACTIONS = tuple(ARITY)


def _task(name, instruction, goal, max_steps=15):
    return TaskSpec(name, instruction, ACTIONS, goal, max_steps)


TASKS = {
    task.name: task
    for task in (
        _task(
            "chill_apple",
            "Put the apple in the fridge and close the fridge.",
            (("at", "apple", "fridge"), ("closed", "fridge")),
        ),
        _task("slice_bread", "Slice the bread.", (("sliced", "bread"),)),
        _task(
            "set_table",
            "Put the mug and the plate on the table.",
            (("at", "mug", "table"), ("at", "plate", "table")),
        ),
        _task(
            "slice_tomato",
            "Slice the tomato, then close the fridge and the drawer.",
            (("sliced", "tomato"), ("closed", "fridge"), ("closed", "drawer")),
            max_steps=20,
        ),
    )
}


@dataclass
class KitchenState:
    agent: str
    where: Dict[str, str]
    opened: Set[str] = field(default_factory=set)
    sliced: Set[str] = field(default_factory=set)

    @property
    def held(self):
        for obj, location in sorted(self.where.items()):
            if location == GRIPPER:
                return obj
        return None

    def visible(self, location: str) -> List[str]:
        if location in CONTAINERS and location not in self.opened:
            return []
        return sorted(obj for obj, at in self.where.items() if at == location)


class ToyKitchen(BaseEnvironment):
    """
    Kitchen with three surfaces, two closed containers and one gripper.
    Movable objects start on random surfaces; the knife starts in the drawer
    and the tomato in the fridge.
    """

    tasks = TASKS

    def reset(self, task: TaskSpec, rng: np.random.Generator):
        where = {obj: SURFACES[int(rng.integers(len(SURFACES)))] for obj in MOVABLE}
        where.update(knife="drawer", tomato="fridge")
        self.state = KitchenState(agent=SURFACES[int(rng.integers(len(SURFACES)))], where=where)
        return self.state

    def holds(self, fact: Fact) -> bool:
        predicate, *args = fact
        if predicate == "at":
            return self.state.where.get(args[0]) == args[1]
        if predicate == "sliced":
            return args[0] in self.state.sliced
        if predicate == "closed":
            return args[0] not in self.state.opened
        raise ValueError(f"Unknown predicate {predicate!r}")

    def candidate_actions(self, task: TaskSpec) -> List[Action]:
        actions = []
        for name in task.allowed_actions:
            if name == "navigate":
                actions += [Action(name, (loc,)) for loc in LOCATIONS]
            elif name in ("open", "close"):
                actions += [Action(name, (c,)) for c in CONTAINERS]
            elif name == "pick":
                actions += [Action(name, (obj,)) for obj in OBJECTS]
            elif name == "place":
                actions += [Action(name, (obj, loc)) for obj in OBJECTS for loc in LOCATIONS]
            elif name == "slice":
                actions += [Action(name, (obj,)) for obj in SLICEABLE]
        return actions

    def describe(self, location: str) -> str:
        seen = self.state.visible(location)
        contents = ", ".join(f"the {obj}" for obj in seen) if seen else "nothing"
        return f"You are at the {location}. You see {contents}."

    def step(self, action: Action) -> Tuple[str, bool]:
        if action.name not in ARITY:
            raise UnsupportedAction(f"The kitchen has no action {action.name!r}")
        if len(action.args) != ARITY[action.name]:
            return "Nothing happens.", False
        return getattr(self, f"_do_{action.name}")(*action.args)

    def _do_navigate(self, location: str):
        if location not in LOCATIONS:
            return "Nothing happens.", False
        self.state.agent = location
        return self.describe(location), True

    def _do_open(self, container: str):
        state = self.state
        if container not in CONTAINERS or state.agent != container or container in state.opened:
            return "Nothing happens.", False
        state.opened.add(container)
        return f"You open the {container}. " + self.describe(container).split(". ", 1)[1], True

    def _do_close(self, container: str):
        state = self.state
        if container not in CONTAINERS or state.agent != container or container not in state.opened:
            return "Nothing happens.", False
        state.opened.discard(container)
        return f"You close the {container}.", True

    def _do_pick(self, obj: str):
        state = self.state
        if state.held is not None or obj not in state.visible(state.agent):
            return "Nothing happens.", False
        state.where[obj] = GRIPPER
        return f"You pick up the {obj}.", True

    def _do_place(self, obj: str, location: str):
        state = self.state
        if state.where.get(obj) != GRIPPER or state.agent != location:
            return "Nothing happens.", False
        if location in CONTAINERS and location not in state.opened:
            return "Nothing happens.", False
        state.where[obj] = location
        preposition = "in" if location in CONTAINERS else "on"
        return f"You put the {obj} {preposition} the {location}.", True

    def _do_slice(self, obj: str):
        state = self.state
        if obj not in SLICEABLE or state.held != "knife" or obj not in state.visible(state.agent):
            return "Nothing happens.", False
        state.sliced.add(obj)
        return f"You slice the {obj}. It is now in slices.", True
