import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spatial.exceptions import (
    DegenerateGeometry,
    InvalidQuestion,
    InvalidScene,
    ObjectOutsideRoom,
    UnknownId,
)
from spatial.models import QAKind, Room, SceneObject
from spatial.services import (
    build_scene_graph,
    direction_of,
    gen_abs_distance,
    gen_count,
    gen_obj_size,
    gen_rel_direction,
    gen_rel_distance,
    gen_room_size,
    generate_scene_questions,
    load_scene,
    numeric_choices,
    scale,
    scene_to_json,
    translate,
)
from spatial.synthetic import random_scene, synthetic_scenes
from spatial.tests import oracle
from vlaforge.seeding import SeedScheme

ROOM = Room((10.0, 10.0, 3.0), (0.0, 0.0, 1.5))


def obj(id, center, category="chair", size=(0.5, 0.5, 0.5)):
    return SceneObject(id, category, center, size)


def graph(*objects):
    return build_scene_graph("s", objects, ROOM)


@pytest.fixture(scope="module")
def scenes():
    return synthetic_scenes(SeedScheme(11), 1000)


def test_empty_scene():
    g = graph()
    assert g.objects == ()
    assert g.category_counts == {}
    assert gen_count(g, "chair").answer == "0"


def test_object_outside_room():
    with pytest.raises(ObjectOutsideRoom):
        graph(obj("a", (6.0, 0.0, 1.0)))


def test_repeated_id_and_bad_size():
    with pytest.raises(InvalidScene):
        graph(obj("a", (0.0, 0.0, 1.0)), obj("a", (1.0, 0.0, 1.0)))
    with pytest.raises(InvalidScene):
        obj("a", (0.0, 0.0, 1.0), size=(0.0, 1.0, 1.0))


def test_category_counts_match_tally():
    rng = np.random.default_rng(0)
    objects = [
        obj(f"o{i}", tuple(rng.uniform(-4, 4, 2)) + (1.0,), category=str(rng.choice(["a", "b", "c"])))
        for i in range(50)
    ]
    g = graph(*objects)
    for category in ("a", "b", "c", "d"):
        assert g.category_counts.get(category, 0) == oracle.tally(objects, category)


def test_count_three_chairs():
    g = graph(*(obj(f"c{i}", (float(i), 0.0, 1.0)) for i in range(3)), obj("t", (0.0, 2.0, 1.0), "table"))
    qa = gen_count(g, "chair")
    assert qa.answer == "3"
    assert qa.kind is QAKind.COUNT
    assert "chair" in qa.question


def test_abs_distance_examples():
    g = graph(obj("a", (0.0, 0.0, 0.0)), obj("b", (3.0, 4.0, 0.0)), obj("c", (0.0, 0.0, 0.0)))
    assert gen_abs_distance(g, "a", "b").answer == "5.0"
    assert gen_abs_distance(g, "a", "c").answer == "0.0"
    with pytest.raises(UnknownId):
        gen_abs_distance(g, "a", "zz")
    with pytest.raises(InvalidQuestion):
        gen_abs_distance(g, "a", "a")


def test_rel_distance_picks_closest():
    g = graph(obj("t", (0.0, 0.0, 1.0)), obj("near", (1.0, 0.0, 1.0)), obj("far", (2.0, 0.0, 1.0)))
    qa = gen_rel_distance(g, "t", ["far", "near"], np.random.default_rng(0))
    assert qa.metadata["candidates"][qa.answer_index] == "near"
    assert qa.choices[qa.answer_index] == qa.answer
    assert qa.metadata["tie_broken"] is False


def test_rel_distance_tie_goes_to_smallest_id():
    g = graph(obj("t", (0.0, 0.0, 1.0)), obj("b", (1.0, 0.0, 1.0)), obj("a", (-1.0, 0.0, 1.0)))
    for seed in range(5):
        qa = gen_rel_distance(g, "t", ["b", "a"], np.random.default_rng(seed))
        assert qa.metadata["candidates"][qa.answer_index] == "a"
        assert qa.metadata["tie_broken"] is True


def test_rel_distance_rejects_bad_candidates():
    g = graph(obj("t", (0.0, 0.0, 1.0)), obj("a", (1.0, 0.0, 1.0)), obj("b", (2.0, 0.0, 1.0)))
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidQuestion):
        gen_rel_distance(g, "t", ["a"], rng)
    with pytest.raises(InvalidQuestion):
        gen_rel_distance(g, "t", ["t", "a"], rng)
    with pytest.raises(UnknownId):
        gen_rel_distance(g, "t", ["a", "x"], rng)


def test_sizes():
    g = graph(obj("a", (0.0, 0.0, 1.0), size=(0.5, 0.2, 0.1)))
    assert gen_obj_size(g, "a").answer == "50"
    room = build_scene_graph("r", [], Room((4.0, 5.0, 2.8), (0.0, 0.0, 1.4)))
    assert gen_room_size(room).answer == "20.0"


@pytest.mark.parametrize(
    "query, expected",
    [
        ((1.0, 0.0), "right"),
        ((-1.0, 0.0), "left"),
        ((0.0, 2.0), "front"),
        ((0.0, -1.0), "back"),
        ((1.0, 1.0), "front"),
        ((-1.0, 1.0), "front"),
        ((1.0, -1.0), "back"),
        ((-1.0, -1.0), "back"),
    ],
)
def test_direction_quadrants_facing_plus_y(query, expected):
    assert direction_of((0.0, 0.0), (0.0, 1.0), query) == expected


def test_direction_degenerate():
    with pytest.raises(DegenerateGeometry):
        direction_of((1.0, 1.0), (1.0, 1.0), (0.0, 0.0))
    g = graph(obj("s", (0.0, 0.0, 0.5)), obj("f", (0.0, 0.0, 2.0)), obj("q", (1.0, 0.0, 1.0)))
    with pytest.raises(DegenerateGeometry):
        gen_rel_direction(g, "s", "f", "q")


def test_rel_direction_question():
    g = graph(obj("s", (0.0, 0.0, 1.0)), obj("f", (0.0, 1.0, 1.0), "tv"), obj("q", (1.0, 0.0, 1.0), "lamp"))
    qa = gen_rel_direction(g, "s", "f", "q")
    assert qa.answer == "right"
    assert qa.choices[qa.answer_index] == "right"
    with pytest.raises(InvalidQuestion):
        gen_rel_direction(g, "s", "s", "q")


def test_all_kinds_match_oracle(scenes):
    seen = Counter()
    for index, g in enumerate(scenes):
        rng = np.random.default_rng(index)
        for qa in generate_scene_questions(g, 6, rng):
            seen[qa.kind] += 1
            meta = qa.metadata or {}
            if qa.kind is QAKind.COUNT:
                assert qa.answer == str(oracle.tally(g.objects, meta["category"]))
            elif qa.kind is QAKind.ABS_DISTANCE:
                a, b = (g.get(i) for i in meta["ids"])
                assert abs(float(qa.answer) - oracle.center_distance(a, b)) <= 0.05 + 1e-9
            elif qa.kind is QAKind.REL_DISTANCE:
                target = g.get(meta["target"])
                candidates = [g.get(i) for i in meta["candidates"]]
                assert meta["candidates"][qa.answer_index] == oracle.closest(target, candidates)
            elif qa.kind is QAKind.OBJ_SIZE:
                assert qa.answer == str(oracle.longest_edge_cm(g.get(meta["ids"][0])))
            elif qa.kind is QAKind.ROOM_SIZE:
                area = g.room_dims[0] * g.room_dims[1]
                assert abs(float(qa.answer) - area) <= 0.05 + 1e-9
            else:
                s, f, q = (g.get(i).center for i in meta["ids"])
                assert qa.answer == oracle.direction(s, f, q)
    assert set(seen) == set(QAKind)


def test_direction_matches_angle_oracle():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        s, f, q = (tuple(rng.uniform(-5, 5, 2)) for _ in range(3))
        assert direction_of(s, f, q) == oracle.direction(s, f, q)


def test_multiple_choice_distractors_never_correct(scenes):
    for g in scenes[:300]:
        rng = np.random.default_rng(1)
        for qa in generate_scene_questions(g, 6, rng, multiple_choice=True):
            assert qa.choices is not None
            assert qa.choices[qa.answer_index] == qa.answer
            assert len(set(qa.choices)) == len(qa.choices)
            assert qa.choices.count(qa.answer) == 1


def test_numeric_choices_for_zero():
    choices, index = numeric_choices(0, lambda v: str(int(v)), 1.0, np.random.default_rng(0))
    assert choices[index] == "0"
    assert sorted(choices) == ["0", "1", "2", "3"]


def test_translation_leaves_answers_unchanged(scenes):
    for g in scenes[:200]:
        moved = translate(g, (3.0, -7.0, 1.0))
        original = generate_scene_questions(g, 6, np.random.default_rng(2))
        shifted = generate_scene_questions(moved, 6, np.random.default_rng(2))
        assert [(q.question, q.answer, q.choices) for q in original] == [
            (q.question, q.answer, q.choices) for q in shifted
        ]


def test_scaling_scales_metric_answers(scenes):
    factor = 2.0
    for g in scenes[:200]:
        original = generate_scene_questions(g, 6, np.random.default_rng(3))
        scaled = generate_scene_questions(scale(g, factor), 6, np.random.default_rng(3))
        assert [q.kind for q in original] == [q.kind for q in scaled]
        for a, b in zip(original, scaled):
            if a.kind in (QAKind.COUNT, QAKind.REL_DIRECTION, QAKind.REL_DISTANCE):
                assert a.answer == b.answer
            elif a.kind is QAKind.ROOM_SIZE:
                assert b.metadata["value"] == pytest.approx(a.metadata["value"] * factor**2)
            else:
                assert b.metadata["value"] == pytest.approx(a.metadata["value"] * factor)


def test_scene_json_round_trip():
    g = random_scene(np.random.default_rng(4), "x")
    assert load_scene(scene_to_json(g)) == g


def test_synthetic_scenes_are_deterministic():
    assert synthetic_scenes(SeedScheme(1), 5) == synthetic_scenes(SeedScheme(1), 5)


def on_quadrant_boundary(g, ids):
    s, f, q = (g.get(i).center for i in ids)
    fx, fy, qx, qy = f[0] - s[0], f[1] - s[1], q[0] - s[0], q[1] - s[1]
    along, across = fx * qx + fy * qy, fx * qy - fy * qx
    return abs(abs(along) - abs(across)) <= 1e-9 * math.hypot(fx, fy) * math.hypot(qx, qy)


def nearly_tied(distances):
    first, second = sorted(distances)[:2]
    return second - first <= 1e-9 * second


@settings(max_examples=150, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.tuples(*[st.floats(-100.0, 100.0, allow_nan=False)] * 3),
    st.sampled_from([0.5, 1.7, 3.0]),
)
def test_answers_survive_any_translation_and_scale(seed, offset, factor):
    g = random_scene(np.random.default_rng(seed), "h")
    moved = translate(scale(g, factor), offset)
    original = generate_scene_questions(g, 12, np.random.default_rng(seed))
    transformed = generate_scene_questions(moved, 12, np.random.default_rng(seed))
    assert [q.kind for q in original] == [q.kind for q in transformed]

    for a, b in zip(original, transformed):
        if a.kind is QAKind.COUNT:
            assert a.answer == b.answer
        elif a.kind is QAKind.REL_DIRECTION:
            if not on_quadrant_boundary(g, a.metadata["ids"]):
                assert a.answer == b.answer
        elif a.kind is QAKind.REL_DISTANCE:
            if not nearly_tied(a.metadata["distances"]):
                assert a.answer == b.answer
        elif a.kind is QAKind.ABS_DISTANCE:
            value = a.metadata["value"] * factor
            assert b.metadata["value"] == pytest.approx(value, rel=1e-9, abs=1e-9)
            # each answer is within half a display unit of its own value
            assert abs(float(b.answer) - factor * float(a.answer)) <= 0.05 * (1 + factor) + 1e-9
