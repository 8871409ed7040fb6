import logging
import math
from collections import Counter
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spatial.exceptions import (
    DegenerateGeometry,
    InvalidQuestion,
    InvalidScene,
    ObjectOutsideRoom,
)
from spatial.models import QAKind, Room, SceneGraph, SceneObject, SpatialQA
from spatial.templates import DIRECTIONS, QUESTION_TEMPLATES

__all__ = (
    "build_scene_graph",
    "direction_of",
    "gen_abs_distance",
    "gen_count",
    "gen_obj_size",
    "gen_rel_direction",
    "gen_rel_distance",
    "gen_room_size",
    "generate_scene_questions",
    "load_scene",
    "numeric_choices",
    "scale",
    "translate",
)

logger = logging.getLogger(__name__)


def build_scene_graph(scene_id: str, objects: Iterable[SceneObject], room: Room) -> SceneGraph:
    objects = tuple(objects)
    seen = set()
    for obj in objects:
        if obj.id in seen:
            raise InvalidScene(f"Scene {scene_id} repeats object id {obj.id!r}")
        seen.add(obj.id)
        if not room.contains(obj.center):
            raise ObjectOutsideRoom(f"Object {obj.id} at {obj.center} lies outside the room")
    return SceneGraph(scene_id, room.dims, room.center, objects)


def load_scene(data: dict) -> SceneGraph:
    room = Room(
        dims=tuple(float(v) for v in data["room"]["dims"]),
        center=tuple(float(v) for v in data["room"]["center"]),
    )
    objects = [SceneObject.from_json(obj) for obj in data.get("objects", [])]
    return build_scene_graph(str(data["scene_id"]), objects, room)


def scene_to_json(graph: SceneGraph) -> dict:
    return {
        "scene_id": graph.scene_id,
        "room": {"dims": list(graph.room_dims), "center": list(graph.room_center)},
        "objects": [
            {"id": o.id, "category": o.category, "center": list(o.center), "size": list(o.size)}
            for o in graph.objects
        ],
    }


def translate(graph: SceneGraph, offset: Tuple[float, float, float]) -> SceneGraph:
    def shift(v):
        return tuple(a + b for a, b in zip(v, offset))

    objects = [SceneObject(o.id, o.category, shift(o.center), o.size) for o in graph.objects]
    return SceneGraph(graph.scene_id, graph.room_dims, shift(graph.room_center), tuple(objects))


def scale(graph: SceneGraph, factor: float) -> SceneGraph:
    def mul(v):
        return tuple(a * factor for a in v)

    objects = [SceneObject(o.id, o.category, mul(o.center), mul(o.size)) for o in graph.objects]
    return SceneGraph(graph.scene_id, mul(graph.room_dims), mul(graph.room_center), tuple(objects))


def _meters(value: float) -> str:
    return f"{value:.1f}"


def _centimeters(value: float) -> str:
    return str(int(math.floor(value + 0.5)))


def _integer(value: float) -> str:
    return str(int(math.floor(value + 0.5)))


def numeric_choices(
    value: float, formatter: Callable[[float], str], step: float, rng: np.random.Generator
) -> Tuple[List[str], int]:
    """Four options, one of them ``formatter(value)``, the others never equal to it."""
    answer = formatter(value)
    pool = [formatter(value * factor) for factor in (0.5, 0.75, 1.25, 1.5, 2.0)]
    pool += [formatter(value + k * step) for k in (1, 2, 3)]
    pool += [formatter(max(value - k * step, 0.0)) for k in (1, 2, 3)]
    distractors = [option for option in dict.fromkeys(pool) if option != answer]
    picked = rng.choice(len(distractors), size=3, replace=False)
    options = [answer] + [distractors[int(i)] for i in picked]
    order = rng.permutation(4)
    return [options[int(i)] for i in order], int(np.flatnonzero(order == 0)[0])


def _numeric_qa(
    graph: SceneGraph,
    kind: QAKind,
    question: str,
    value: float,
    formatter: Callable[[float], str],
    step: float,
    rng: Optional[np.random.Generator],
    multiple_choice: bool,
    **metadata,
) -> SpatialQA:
    choices = answer_index = None
    if multiple_choice:
        if rng is None:
            raise InvalidQuestion("Multiple choice needs a random source")
        choices, answer_index = numeric_choices(value, formatter, step, rng)
    return SpatialQA(
        scene_id=graph.scene_id,
        kind=kind,
        question=question,
        answer=formatter(value),
        choices=choices,
        answer_index=answer_index,
        metadata={"value": value, **metadata},
    )


def gen_count(
    graph: SceneGraph,
    category: str,
    rng: Optional[np.random.Generator] = None,
    multiple_choice: bool = False,
) -> SpatialQA:
    count = sum(1 for obj in graph.objects if obj.category == category)
    question = QUESTION_TEMPLATES[QAKind.COUNT].format(category=category)
    return _numeric_qa(
        graph, QAKind.COUNT, question, count, _integer, 1.0, rng, multiple_choice, category=category
    )


def _distance(a: SceneObject, b: SceneObject) -> float:
    return math.dist(a.center, b.center)


def gen_abs_distance(
    graph: SceneGraph,
    id_a: str,
    id_b: str,
    rng: Optional[np.random.Generator] = None,
    multiple_choice: bool = False,
) -> SpatialQA:
    if id_a == id_b:
        raise InvalidQuestion("Distance question needs two different objects")
    a, b = graph.get(id_a), graph.get(id_b)
    question = QUESTION_TEMPLATES[QAKind.ABS_DISTANCE].format(a=graph.name(a), b=graph.name(b))
    return _numeric_qa(
        graph,
        QAKind.ABS_DISTANCE,
        question,
        _distance(a, b),
        _meters,
        0.5,
        rng,
        multiple_choice,
        ids=[id_a, id_b],
    )


def gen_rel_distance(
    graph: SceneGraph,
    target_id: str,
    candidate_ids: Sequence[str],
    rng: np.random.Generator,
) -> SpatialQA:
    if len(candidate_ids) < 2 or len(set(candidate_ids)) != len(candidate_ids):
        raise InvalidQuestion("Relative distance needs at least two distinct candidates")
    if target_id in candidate_ids:
        raise InvalidQuestion("The target cannot be one of its own candidates")
    target = graph.get(target_id)
    distances = {cid: _distance(target, graph.get(cid)) for cid in candidate_ids}
    # ties resolve to the lexicographically smallest id
    winner = min(candidate_ids, key=lambda cid: (distances[cid], cid))
    tied = sum(1 for d in distances.values() if d == distances[winner]) > 1

    order = [candidate_ids[int(i)] for i in rng.permutation(len(candidate_ids))]
    choices = [graph.name(graph.get(cid)) for cid in order]
    question = QUESTION_TEMPLATES[QAKind.REL_DISTANCE].format(
        options=", ".join(choices), target=graph.name(target)
    )
    answer_index = order.index(winner)
    return SpatialQA(
        scene_id=graph.scene_id,
        kind=QAKind.REL_DISTANCE,
        question=question,
        answer=choices[answer_index],
        choices=choices,
        answer_index=answer_index,
        metadata={
            "target": target_id,
            "candidates": order,
            "distances": [distances[cid] for cid in order],
            "tie_broken": tied,
        },
    )


def gen_obj_size(
    graph: SceneGraph,
    object_id: str,
    rng: Optional[np.random.Generator] = None,
    multiple_choice: bool = False,
) -> SpatialQA:
    obj = graph.get(object_id)
    question = QUESTION_TEMPLATES[QAKind.OBJ_SIZE].format(object=graph.name(obj))
    return _numeric_qa(
        graph,
        QAKind.OBJ_SIZE,
        question,
        max(obj.size) * 100.0,
        _centimeters,
        10.0,
        rng,
        multiple_choice,
        ids=[object_id],
    )


def gen_room_size(
    graph: SceneGraph,
    rng: Optional[np.random.Generator] = None,
    multiple_choice: bool = False,
) -> SpatialQA:
    area = graph.room_dims[0] * graph.room_dims[1]
    question = QUESTION_TEMPLATES[QAKind.ROOM_SIZE]
    return _numeric_qa(graph, QAKind.ROOM_SIZE, question, area, _meters, 2.0, rng, multiple_choice)


def direction_of(standing: Sequence[float], facing: Sequence[float], query: Sequence[float]) -> str:
    """
    Quadrant of ``query`` seen from ``standing`` while looking at ``facing``,
    on the floor plane. Boundaries at +-45 deg go to front, at +-135 deg to back.
    """
    fx, fy = facing[0] - standing[0], facing[1] - standing[1]
    qx, qy = query[0] - standing[0], query[1] - standing[1]
    if fx == 0 and fy == 0:
        raise DegenerateGeometry("Standing and facing objects coincide in plan")
    if qx == 0 and qy == 0:
        raise DegenerateGeometry("Query object coincides with the standing object in plan")
    along = fx * qx + fy * qy
    across = fx * qy - fy * qx
    if along >= abs(across):
        return "front"
    if -along >= abs(across):
        return "back"
    return "left" if across > 0 else "right"


def gen_rel_direction(
    graph: SceneGraph, standing_id: str, facing_id: str, query_id: str
) -> SpatialQA:
    if len({standing_id, facing_id, query_id}) != 3:
        raise InvalidQuestion("Direction question needs three distinct objects")
    standing, facing, query = (graph.get(i) for i in (standing_id, facing_id, query_id))
    answer = direction_of(standing.center, facing.center, query.center)
    question = QUESTION_TEMPLATES[QAKind.REL_DIRECTION].format(
        standing=graph.name(standing), facing=graph.name(facing), query=graph.name(query)
    )
    return SpatialQA(
        scene_id=graph.scene_id,
        kind=QAKind.REL_DIRECTION,
        question=question,
        answer=answer,
        choices=list(DIRECTIONS),
        answer_index=DIRECTIONS.index(answer),
        metadata={"ids": [standing_id, facing_id, query_id]},
    )


def supported_kinds(graph: SceneGraph) -> List[QAKind]:
    count = len(graph.objects)
    kinds = [QAKind.ROOM_SIZE]
    if count >= 1:
        kinds += [QAKind.COUNT, QAKind.OBJ_SIZE]
    if count >= 2:
        kinds.append(QAKind.ABS_DISTANCE)
    if count >= 3:
        kinds += [QAKind.REL_DISTANCE, QAKind.REL_DIRECTION]
    return [kind for kind in QAKind if kind in kinds]


def generate_scene_questions(
    graph: SceneGraph,
    per_scene: int,
    rng: np.random.Generator,
    multiple_choice: bool = False,
    counters: Optional[Counter] = None,
) -> List[SpatialQA]:
    counters = counters if counters is not None else Counter()
    kinds = supported_kinds(graph)
    ids = [obj.id for obj in graph.objects]
    questions = []
    for _ in range(per_scene):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind is QAKind.COUNT:
            category = sorted(graph.category_counts)[int(rng.integers(len(graph.category_counts)))]
            qa = gen_count(graph, category, rng, multiple_choice)
        elif kind is QAKind.ABS_DISTANCE:
            a, b = rng.choice(len(ids), size=2, replace=False)
            qa = gen_abs_distance(graph, ids[int(a)], ids[int(b)], rng, multiple_choice)
        elif kind is QAKind.REL_DISTANCE:
            size = int(rng.integers(3, min(len(ids), 5) + 1))
            picked = [ids[int(i)] for i in rng.choice(len(ids), size=size, replace=False)]
            qa = gen_rel_distance(graph, picked[0], picked[1:], rng)
        elif kind is QAKind.OBJ_SIZE:
            qa = gen_obj_size(graph, ids[int(rng.integers(len(ids)))], rng, multiple_choice)
        elif kind is QAKind.ROOM_SIZE:
            qa = gen_room_size(graph, rng, multiple_choice)
        else:
            qa = None
            for _attempt in range(5):
                triple = [ids[int(i)] for i in rng.choice(len(ids), size=3, replace=False)]
                try:
                    qa = gen_rel_direction(graph, *triple)
                    break
                except DegenerateGeometry:
                    continue
            if qa is None:
                counters["degenerate"] += 1
                logger.warning(f"No usable direction triple in scene {graph.scene_id}")
                continue
        counters[kind.value] += 1
        questions.append(qa)
    return questions
