"""
Per-line checks for every JSONL record kind forge writes.

A check receives one decoded line and raises ``SchemaViolation`` on the first
problem it finds. Field layouts are documented in ``docs/schemas.md``.
"""
from typing import Callable, Dict, Iterable, Tuple

from experiments.models import RunReport
from geometry.coords import NORM_MAX
from grounding.markup import parse_markup
from grounding.models import TaskKind as GroundingKind
from planning.models import Action
from records.exceptions import SchemaViolation, UnknownSchema
from sim.models import EpisodeRecord, QAType
from spatial.models import QAKind
from vlaforge.exceptions import ForgeError

__all__ = ("SCHEMAS", "get_check")

Check = Callable[[dict], None]


def require(data: dict, fields: Iterable[Tuple[str, type]]):
    if not isinstance(data, dict):
        raise SchemaViolation(f"Expected a JSON object, got {type(data).__name__}")
    for name, kind in fields:
        if name not in data:
            raise SchemaViolation(f"Missing required key {name!r}", name)
        # bool is an int subclass
        if kind is int and isinstance(data[name], bool) or not isinstance(data[name], kind):
            raise SchemaViolation(f"{name!r} should be {kind.__name__}", name)


def check_choice(data: dict, name: str, allowed):
    if data[name] not in allowed:
        raise SchemaViolation(f"{name!r} is {data[name]!r}, expected one of {sorted(allowed)}", name)


def check_markup(text: str, expected=None):
    try:
        geometry = parse_markup(text)
    except ForgeError as exc:
        raise SchemaViolation(str(exc))
    if expected is not None and geometry.as_list() != list(expected):
        raise SchemaViolation(f"Markup {geometry.as_list()} disagrees with norm_geometry {expected}")


def check_grounding(data: dict):
    require(
        data,
        (
            ("image_id", str),
            ("task_kind", str),
            ("question", str),
            ("answer", str),
            ("norm_geometry", list),
            ("record_index", int),
        ),
    )
    check_choice(data, "task_kind", GroundingKind.values())
    geometry = data["norm_geometry"]
    if len(geometry) not in (2, 4):
        raise SchemaViolation(f"norm_geometry has {len(geometry)} values, expected 2 or 4", "norm_geometry")
    for value in geometry:
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= NORM_MAX:
            raise SchemaViolation(f"Coordinate {value!r} outside [0, {NORM_MAX}]", "norm_geometry")
    carrier = "question" if data["task_kind"] == GroundingKind.TEXT_FROM_COORDS.value else "answer"
    check_markup(data[carrier], geometry)


def check_spatial(data: dict):
    require(data, (("scene_id", str), ("kind", str), ("question", str), ("answer", str)))
    check_choice(data, "kind", QAKind.values())
    if "choices" in data:
        choices = data["choices"]
        index = data.get("answer_index")
        if not isinstance(choices, list) or not isinstance(index, int) or not 0 <= index < len(choices):
            raise SchemaViolation("answer_index must point into choices", "answer_index")
        if choices[index] != data["answer"]:
            raise SchemaViolation("choices[answer_index] differs from answer", "answer")


def check_planning(data: dict):
    require(
        data,
        (
            ("task", str),
            ("instruction", str),
            ("step", int),
            ("reasoning", str),
            ("action", str),
            ("observation", str),
            ("success", bool),
            ("text", str),
        ),
    )
    if data["step"] < 1:
        raise SchemaViolation("step numbering starts at 1", "step")
    try:
        Action.parse(data["action"])
    except ForgeError as exc:
        raise SchemaViolation(str(exc), "action")
    if not data["text"].startswith(f"Reasoning-step-{data['step']}:"):
        raise SchemaViolation("text does not start with its reasoning step", "text")


def check_trajectory(data: dict):
    require(data, (("task", str), ("instruction", str), ("final_success", bool), ("steps", list)))
    for position, step in enumerate(data["steps"], start=1):
        require(step, (("action", str), ("observation", str), ("success", bool)))
        try:
            Action.parse(step["action"])
        except ForgeError as exc:
            raise SchemaViolation(f"step {position}: {exc}", "steps")


def check_episode(data: dict):
    require(
        data,
        (("task", str), ("success", bool), ("steps_used", int), ("states", list), ("actions", list)),
    )
    if len(data["states"]) != len(data["actions"]) + 1:
        raise SchemaViolation("an episode has one more state than actions", "states")
    if data["steps_used"] != len(data["actions"]):
        raise SchemaViolation("steps_used differs from the number of actions", "steps_used")
    try:
        EpisodeRecord.from_json(data)
    except (ForgeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"{type(exc).__name__}: {exc}")


def check_indomain(data: dict):
    require(data, (("task", str), ("kind", str), ("question", str), ("answer", str)))
    check_choice(data, "kind", QAType.values())
    if data["kind"] == QAType.GROUNDING.value:
        check_markup(data["answer"])


def check_run_report(data: dict):
    require(
        data,
        (
            ("variant", str),
            ("seed", int),
            ("tasks", list),
            ("threshold", float),
            ("success_rate", dict),
            ("censored", bool),
        ),
    )
    try:
        report = RunReport.from_json(data)
    except TypeError as exc:
        raise SchemaViolation(str(exc))
    if report.censored != (report.steps_to_threshold is None):
        raise SchemaViolation("censored runs carry no crossing step, crossed runs carry one", "censored")


SCHEMAS: Dict[str, Check] = {
    "grounding": check_grounding,
    "spatial": check_spatial,
    "planning": check_planning,
    "trajectory": check_trajectory,
    "episode": check_episode,
    "indomain": check_indomain,
    "run_report": check_run_report,
}


def get_check(name: str) -> Check:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise UnknownSchema(f"Unknown schema {name!r}, expected one of {sorted(SCHEMAS)}")
