from dataclasses import dataclass
from typing import List, Optional

from django.utils.translation import gettext_lazy as _

from geometry.masks import PixelMask
from grounding.exceptions import InvalidRecord
from vlaforge.utils import ChoicesEnum

__all__ = ("GroundingSample", "MaskRecord", "TaskKind")


class TaskKind(ChoicesEnum):
    BOX_FROM_TEXT = "box_from_text", _("Box from text")
    POINT_FROM_TEXT = "point_from_text", _("Point from text")
    TEXT_FROM_COORDS = "text_from_coords", _("Text from coordinates")

    @classmethod
    def from_mix_key(cls, key: str) -> "TaskKind":
        return {"box": cls.BOX_FROM_TEXT, "point": cls.POINT_FROM_TEXT, "text": cls.TEXT_FROM_COORDS}[key]


@dataclass(frozen=True)
class MaskRecord:
    image_id: str
    width: int
    height: int
    mask: PixelMask
    quality_score: float
    caption: Optional[str] = None
    category: Optional[str] = None

    def __post_init__(self):
        if not 0.0 <= self.quality_score <= 1.0:
            raise InvalidRecord(f"{self.image_id}: quality_score {self.quality_score} outside [0, 1]")
        if (self.mask.width, self.mask.height) != (self.width, self.height):
            raise InvalidRecord(f"{self.image_id}: mask dims do not match the image")

    @classmethod
    def from_json(cls, data: dict) -> "MaskRecord":
        try:
            width, height = int(data["width"]), int(data["height"])
            return cls(
                image_id=str(data["image_id"]),
                width=width,
                height=height,
                mask=PixelMask.from_rle(width, height, data["counts"]),
                quality_score=float(data["quality_score"]),
                caption=data.get("caption"),
                category=data.get("category"),
            )
        except KeyError as exc:
            raise InvalidRecord(f"Mask record is missing {exc}") from exc

    def to_json(self) -> dict:
        data = {
            "image_id": self.image_id,
            "width": self.width,
            "height": self.height,
            "counts": self.mask.to_rle(),
            "quality_score": self.quality_score,
        }
        if self.caption is not None:
            data["caption"] = self.caption
        if self.category is not None:
            data["category"] = self.category
        return data


@dataclass(frozen=True)
class GroundingSample:
    image_id: str
    task_kind: TaskKind
    question: str
    answer: str
    norm_geometry: List[int]
    record_index: int
