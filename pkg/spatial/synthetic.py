"""Random indoor scenes on a 1/64 m grid, so rigid moves stay exact in floating point."""
from typing import List

import numpy as np

from spatial.models import Room, SceneGraph, SceneObject
from spatial.services import build_scene_graph
from vlaforge.seeding import SeedScheme

__all__ = ("CATEGORIES", "GRID", "random_scene", "synthetic_scenes")

CATEGORIES = ("chair", "table", "sofa", "bed", "lamp", "tv", "shelf", "plant", "sink", "door")
GRID = 64


def _snap(values) -> tuple:
    return tuple(float(v) for v in np.round(np.asarray(values) * GRID) / GRID)


def random_scene(rng: np.random.Generator, scene_id: str, max_objects: int = 12) -> SceneGraph:
    dims = _snap([rng.uniform(3.0, 8.0), rng.uniform(3.0, 8.0), rng.uniform(2.5, 3.2)])
    center = _snap(rng.uniform(-5.0, 5.0, size=3))
    room = Room(dims, center)
    low = np.asarray(center) - np.asarray(dims) / 2
    objects = []
    for index in range(int(rng.integers(0, max_objects + 1))):
        position = _snap(low + rng.uniform(0.05, 0.95, size=3) * np.asarray(dims))
        size = _snap(rng.uniform(0.1, 2.0, size=3))
        category = CATEGORIES[int(rng.integers(len(CATEGORIES)))]
        objects.append(SceneObject(f"o{index:02d}", category, position, size))
    return build_scene_graph(scene_id, objects, room)


def synthetic_scenes(scheme: SeedScheme, count: int, max_objects: int = 12) -> List[SceneGraph]:
    return [
        random_scene(scheme.rng("synthetic-scene", index), f"scene-{index:05d}", max_objects)
        for index in range(count)
    ]
