from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from django.utils.translation import gettext_lazy as _

from spatial.exceptions import InvalidScene, UnknownId
from vlaforge.utils import ChoicesEnum

__all__ = ("QAKind", "Room", "SceneGraph", "SceneObject", "SpatialQA")

Vector = Tuple[float, float, float]


class QAKind(ChoicesEnum):
    COUNT = "count", _("Object count")
    ABS_DISTANCE = "abs_distance", _("Absolute distance")
    REL_DISTANCE = "rel_distance", _("Relative distance")
    OBJ_SIZE = "obj_size", _("Object size")
    ROOM_SIZE = "room_size", _("Room size")
    REL_DIRECTION = "rel_direction", _("Relative direction")


@dataclass(frozen=True)
class SceneObject:
    id: str
    category: str
    center: Vector
    size: Vector

    def __post_init__(self):
        if any(extent <= 0 for extent in self.size):
            raise InvalidScene(f"Object {self.id} has non-positive size {self.size}")

    @classmethod
    def from_json(cls, data: dict) -> "SceneObject":
        return cls(
            id=str(data["id"]),
            category=str(data["category"]),
            center=tuple(float(v) for v in data["center"]),
            size=tuple(float(v) for v in data["size"]),
        )


@dataclass(frozen=True)
class Room:
    dims: Vector
    center: Vector

    def contains(self, point: Vector) -> bool:
        return all(
            abs(p - c) <= d / 2 for p, c, d in zip(point, self.center, self.dims)
        )


@dataclass(frozen=True)
class SceneGraph:
    scene_id: str
    room_dims: Vector
    room_center: Vector
    objects: Tuple[SceneObject, ...] = field(default_factory=tuple)

    @property
    def category_counts(self) -> Dict[str, int]:
        return dict(Counter(obj.category for obj in self.objects))

    def get(self, object_id: str) -> SceneObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise UnknownId(f"Scene {self.scene_id} has no object {object_id!r}")

    def name(self, obj: SceneObject) -> str:
        """Category, disambiguated by id when the category repeats."""
        if self.category_counts[obj.category] > 1:
            return f"{obj.category} ({obj.id})"
        return obj.category


@dataclass(frozen=True)
class SpatialQA:
    scene_id: str
    kind: QAKind
    question: str
    answer: str
    choices: Optional[List[str]] = None
    answer_index: Optional[int] = None
    metadata: Optional[dict] = None
