"""
Pixel boxes and points, and the resolution-invariant [0, 1000] grid.

Origin is the top-left pixel, x grows rightward and y downward. Boxes are
inclusive sets of pixels. Normalization maps pixel ``0`` to ``0`` and pixel
``side - 1`` to ``1000``, rounding half away from zero.
"""
import math
from dataclasses import dataclass

from geometry.exceptions import OutOfBounds

__all__ = (
    "NORM_MAX",
    "BBox",
    "NormBox",
    "NormCoord",
    "Point2D",
    "bbox_iou",
    "denormalize_bbox",
    "denormalize_point",
    "normalize_bbox",
    "normalize_point",
    "normalize_unit",
    "normalize_value",
    "denormalize_value",
    "round_trip_bound",
)

NORM_MAX = 1000


@dataclass(frozen=True)
class Point2D:
    x: int
    y: int


@dataclass(frozen=True)
class BBox:
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"Inverted box {self}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, point: Point2D) -> bool:
        return self.x_min <= point.x <= self.x_max and self.y_min <= point.y <= self.y_max


@dataclass(frozen=True)
class NormCoord:
    x: int
    y: int

    def __post_init__(self):
        for value in (self.x, self.y):
            if not 0 <= value <= NORM_MAX:
                raise OutOfBounds(f"Normalized coordinate {value} outside [0, {NORM_MAX}]")

    def as_list(self):
        return [self.x, self.y]


@dataclass(frozen=True)
class NormBox:
    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self):
        NormCoord(self.x1, self.y1)
        NormCoord(self.x2, self.y2)
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise OutOfBounds(f"Inverted normalized box {self}")

    def as_list(self):
        return [self.x1, self.y1, self.x2, self.y2]


def _round_ratio(numerator: int, denominator: int) -> int:
    # exact half-away-from-zero rounding of a non-negative rational
    return (2 * numerator + denominator) // (2 * denominator)


def normalize_value(value: int, side: int) -> int:
    if side < 1:
        raise OutOfBounds(f"Image side must be >= 1, got {side}")
    if not 0 <= value <= side - 1:
        raise OutOfBounds(f"Pixel {value} outside [0, {side - 1}]")
    if side == 1:
        return 0
    return _round_ratio(value * NORM_MAX, side - 1)


def denormalize_value(value: int, side: int) -> int:
    if side < 1:
        raise OutOfBounds(f"Image side must be >= 1, got {side}")
    if not 0 <= value <= NORM_MAX:
        raise OutOfBounds(f"Normalized value {value} outside [0, {NORM_MAX}]")
    return _round_ratio(value * (side - 1), NORM_MAX)


def normalize_point(point: Point2D, width: int, height: int) -> NormCoord:
    return NormCoord(normalize_value(point.x, width), normalize_value(point.y, height))


def denormalize_point(coord: NormCoord, width: int, height: int) -> Point2D:
    return Point2D(denormalize_value(coord.x, width), denormalize_value(coord.y, height))


def normalize_bbox(box: BBox, width: int, height: int) -> NormBox:
    return NormBox(
        normalize_value(box.x_min, width),
        normalize_value(box.y_min, height),
        normalize_value(box.x_max, width),
        normalize_value(box.y_max, height),
    )


def denormalize_bbox(box: NormBox, width: int, height: int) -> BBox:
    return BBox(
        denormalize_value(box.x1, width),
        denormalize_value(box.y1, height),
        denormalize_value(box.x2, width),
        denormalize_value(box.y2, height),
    )


def _span(lo_a: int, hi_a: int, lo_b: int, hi_b: int) -> int:
    return max(0, min(hi_a, hi_b) - max(lo_a, lo_b) + 1)


def bbox_iou(a: BBox, b: BBox) -> float:
    intersection = _span(a.x_min, a.x_max, b.x_min, b.x_max) * _span(
        a.y_min, a.y_max, b.y_min, b.y_max
    )
    union = a.area + b.area - intersection
    return intersection / union


def round_trip_bound(side: int) -> int:
    """Largest pixel error a normalize/denormalize round trip can produce."""
    # half a grid cell of quantization plus half a pixel of re-rounding
    return int(0.5 + 0.5 * (side - 1) / NORM_MAX)


def normalize_unit(value: float) -> int:
    """A workspace coordinate in [0, 1] on the [0, 1000] grid, half away from zero."""
    if not 0.0 <= value <= 1.0:
        raise OutOfBounds(f"Workspace coordinate {value} outside [0, 1]")
    return int(math.floor(value * NORM_MAX + 0.5))
