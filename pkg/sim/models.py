from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from django.utils.translation import gettext_lazy as _

from sim.exceptions import InvalidState
from vlaforge.utils import ChoicesEnum

__all__ = (
    "MAX_DELTA",
    "EpisodeRecord",
    "QAType",
    "SimAction",
    "SimObject",
    "SimState",
    "Target",
    "TaskConfig",
    "TaskKind",
)

MAX_DELTA = 0.05

Position = Tuple[float, float]


class TaskKind(ChoicesEnum):
    REACH = "reach", _("Reach")
    PICK_PLACE = "pick_place", _("Pick and place")
    STACK = "stack", _("Stack")


class QAType(ChoicesEnum):
    GENERAL = "general", _("General")
    GROUNDING = "grounding", _("Grounding")
    SPATIAL = "spatial", _("Spatial reasoning")


@dataclass(frozen=True)
class TaskConfig:
    name: str
    kind: TaskKind
    instruction: str
    objects: int
    max_steps: int
    target_radius: float
    object_radius: float = 0.04
    categories: Tuple[str, ...] = ()
    target_name: str = "target"

    def __post_init__(self):
        if self.max_steps < 1 or self.objects < 0:
            raise ValueError(f"Invalid task config {self.name}")
        if self.objects > len(self.categories) and self.objects:
            raise ValueError(f"Task {self.name} needs {self.objects} categories")


@dataclass(frozen=True)
class SimObject:
    id: str
    category: str
    pos: Position
    radius: float
    held: bool = False


@dataclass(frozen=True)
class Target:
    id: str
    pos: Position
    radius: float


@dataclass(frozen=True)
class SimState:
    gripper: Position
    grip_closed: bool
    objects: Tuple[SimObject, ...] = ()
    targets: Tuple[Target, ...] = ()

    def __post_init__(self):
        positions = [self.gripper] + [o.pos for o in self.objects]
        if any(not (0.0 <= v <= 1.0) for p in positions for v in p):
            raise InvalidState(f"Position outside the workspace in {self}")
        held = [o for o in self.objects if o.held]
        if len(held) > 1:
            raise InvalidState("More than one object held")
        if held and held[0].pos != self.gripper:
            raise InvalidState("Held object is not at the gripper")

    @property
    def held(self) -> Optional[SimObject]:
        for obj in self.objects:
            if obj.held:
                return obj
        return None

    def to_json(self) -> dict:
        return {
            "gripper": list(self.gripper),
            "grip_closed": self.grip_closed,
            "objects": [
                {"id": o.id, "category": o.category, "pos": list(o.pos), "radius": o.radius, "held": o.held}
                for o in self.objects
            ],
            "targets": [{"id": t.id, "pos": list(t.pos), "radius": t.radius} for t in self.targets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimState":
        return cls(
            gripper=tuple(data["gripper"]),
            grip_closed=bool(data["grip_closed"]),
            objects=tuple(
                SimObject(o["id"], o["category"], tuple(o["pos"]), o["radius"], o["held"])
                for o in data["objects"]
            ),
            targets=tuple(Target(t["id"], tuple(t["pos"]), t["radius"]) for t in data["targets"]),
        )


@dataclass(frozen=True)
class SimAction:
    dx: float
    dy: float
    grip: float = 0.0

    @classmethod
    def from_array(cls, values) -> "SimAction":
        dx, dy, grip = (float(v) for v in values)
        return cls(dx, dy, grip)

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.grip], dtype=np.float64)

    def clipped(self) -> "SimAction":
        return SimAction(
            float(np.clip(self.dx, -MAX_DELTA, MAX_DELTA)),
            float(np.clip(self.dy, -MAX_DELTA, MAX_DELTA)),
            float(np.clip(self.grip, -1.0, 1.0)),
        )


@dataclass
class EpisodeRecord:
    task: str
    states: List[SimState] = field(default_factory=list)
    actions: List[SimAction] = field(default_factory=list)
    success: bool = False
    steps_used: int = 0
    subgoals: Optional[List[str]] = None

    def to_json(self) -> dict:
        data = {
            "task": self.task,
            "success": self.success,
            "steps_used": self.steps_used,
            "states": [s.to_json() for s in self.states],
            "actions": [[a.dx, a.dy, a.grip] for a in self.actions],
        }
        if self.subgoals is not None:
            data["subgoals"] = self.subgoals
        return data

    @classmethod
    def from_json(cls, data: dict) -> "EpisodeRecord":
        return cls(
            task=data["task"],
            states=[SimState.from_json(s) for s in data["states"]],
            actions=[SimAction.from_array(a) for a in data["actions"]],
            success=data["success"],
            steps_used=data["steps_used"],
            subgoals=data.get("subgoals"),
        )
