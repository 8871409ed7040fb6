"""Synthetic mask corpora for hermetic runs and tests."""
from typing import List

import numpy as np

from geometry.masks import PixelMask
from grounding.models import MaskRecord
from vlaforge.seeding import SeedScheme

__all__ = ("CATEGORIES", "random_mask", "synthetic_corpus")

CATEGORIES = ("cup", "bottle", "chair", "lamp", "book", "plant", "laptop", "bowl")


def random_mask(rng: np.random.Generator, width: int, height: int) -> PixelMask:
    """An axis-aligned ellipse or rectangle blob, never empty."""
    cx, cy = rng.uniform(0, width - 1), rng.uniform(0, height - 1)
    rx, ry = rng.uniform(0.5, width / 3 + 1), rng.uniform(0.5, height / 3 + 1)
    ys, xs = np.mgrid[0:height, 0:width]
    if rng.random() < 0.5:
        bits = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2 <= 1.0
    else:
        bits = (np.abs(xs - cx) <= rx) & (np.abs(ys - cy) <= ry)
    bits[int(round(cy)), int(round(cx))] = True
    return PixelMask(width, height, bits)


def synthetic_corpus(scheme: SeedScheme, count: int, max_side: int = 96) -> List[MaskRecord]:
    records = []
    for index in range(count):
        rng = scheme.rng("synthetic-mask", index)
        width, height = (int(side) for side in rng.integers(8, max_side + 1, size=2))
        records.append(
            MaskRecord(
                image_id=f"synthetic-{index:06d}",
                width=width,
                height=height,
                mask=random_mask(rng, width, height),
                quality_score=round(float(rng.uniform(0.6, 1.0)), 3),
                category=CATEGORIES[int(rng.integers(len(CATEGORIES)))],
            )
        )
    return records
