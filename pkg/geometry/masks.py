"""
Raster masks, their run-length encoding, and the mask -> box/point derivations.

RLE layout is row-major and starts with a background run (possibly 0), runs
alternate background/foreground and sum to ``width * height``.
"""
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from geometry.coords import BBox, Point2D
from geometry.exceptions import EmptyMask, InvalidMask

__all__ = (
    "PixelMask",
    "centroid_point",
    "decode_rle",
    "encode_rle",
    "mask_to_bbox",
    "rle_area",
    "rle_to_bbox",
    "sample_point_in_mask",
)


@dataclass(frozen=True, eq=False)
class PixelMask:
    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidMask(f"Mask dims must be >= 1, got {self.width}x{self.height}")
        bits = np.asarray(self.bits, dtype=bool)
        if bits.size != self.width * self.height:
            raise InvalidMask(
                f"Mask has {bits.size} bits, expected {self.width * self.height}"
            )
        bits = bits.reshape(self.height, self.width).copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def __eq__(self, other):
        if not isinstance(other, PixelMask):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.width, self.height, self.bits.tobytes()))

    def __getitem__(self, point: Point2D) -> bool:
        return bool(self.bits[point.y, point.x])

    @property
    def area(self) -> int:
        return int(self.bits.sum())

    @property
    def is_empty(self) -> bool:
        return not self.bits.any()

    @classmethod
    def from_rle(cls, width: int, height: int, counts: Sequence[int]) -> "PixelMask":
        return cls(width, height, decode_rle(width, height, counts))

    def to_rle(self) -> List[int]:
        return encode_rle(self)


def encode_rle(mask: PixelMask) -> List[int]:
    flat = mask.bits.ravel()
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], changes, [flat.size]))
    counts = np.diff(bounds).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return counts


def decode_rle(width: int, height: int, counts: Sequence[int]) -> np.ndarray:
    runs = np.asarray(counts, dtype=np.int64)
    if runs.ndim != 1 or (runs < 0).any():
        raise InvalidMask("RLE counts must be a flat list of non-negative integers")
    if int(runs.sum()) != width * height:
        raise InvalidMask(f"RLE counts sum to {int(runs.sum())}, expected {width * height}")
    values = np.arange(runs.size) % 2 == 1
    return np.repeat(values, runs).reshape(height, width)


def rle_area(counts: Sequence[int]) -> int:
    return int(sum(counts[1::2]))


def rle_to_bbox(width: int, height: int, counts: Sequence[int]) -> BBox:
    """Minimal enclosing box computed from the runs without decoding."""
    runs = np.asarray(counts, dtype=np.int64)
    ends = np.cumsum(runs)
    starts = ends - runs
    foreground = (np.arange(runs.size) % 2 == 1) & (runs > 0)
    if not foreground.any():
        raise EmptyMask("Mask has no foreground pixel")
    first, last = starts[foreground], ends[foreground] - 1
    row_first, row_last = first // width, last // width
    single_row = row_first == row_last
    x_min = np.where(single_row, first % width, 0).min()
    x_max = np.where(single_row, last % width, width - 1).max()
    return BBox(int(x_min), int(row_first.min()), int(x_max), int(row_last.max()))


def mask_to_bbox(mask: PixelMask) -> BBox:
    rows = np.flatnonzero(mask.bits.any(axis=1))
    cols = np.flatnonzero(mask.bits.any(axis=0))
    if rows.size == 0:
        raise EmptyMask("Mask has no foreground pixel")
    return BBox(int(cols[0]), int(rows[0]), int(cols[-1]), int(rows[-1]))


def sample_point_in_mask(mask: PixelMask, rng: np.random.Generator) -> Point2D:
    ys, xs = np.nonzero(mask.bits)
    if xs.size == 0:
        raise EmptyMask("Mask has no foreground pixel")
    index = int(rng.integers(xs.size))
    return Point2D(int(xs[index]), int(ys[index]))


def centroid_point(mask: PixelMask) -> Point2D:
    """Foreground pixel nearest the mask's mean coordinate, first in row-major order on ties."""
    ys, xs = np.nonzero(mask.bits)
    if xs.size == 0:
        raise EmptyMask("Mask has no foreground pixel")
    distance = (xs - xs.mean()) ** 2 + (ys - ys.mean()) ** 2
    index = int(np.argmin(distance))
    return Point2D(int(xs[index]), int(ys[index]))
