"""
In-domain QA over simulator states: a general state-and-plan description,
grounding questions answered in workspace-normalized [0, 1000] markup, and
spatial questions between two scene entities.

Workspace coordinates map to the grid as ``round(1000 * v)``; the viewer
looks along +y, so an entity is to the left of another iff its x is smaller.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from geometry.coords import NormBox, NormCoord, normalize_unit
from grounding.markup import render_markup
from sim.demos import run_expert_episode
from sim.exceptions import UnknownKind
from sim.expert import subgoal_label
from sim.models import QAType, SimState, TaskConfig
from vlaforge.parallel import ordered_map
from vlaforge.utils import as_dict

__all__ = (
    "InDomainQA",
    "annotate",
    "annotate_states",
    "entities",
    "instruction_for",
    "sample_annotation",
)


@dataclass(frozen=True)
class InDomainQA:
    task: str
    kind: QAType
    question: str
    answer: str
    metadata: Optional[dict] = None


def instruction_for(state: SimState, task: TaskConfig) -> str:
    names = {"target": state.targets[0].id if state.targets else ""}
    if state.objects:
        names["object"] = state.objects[0].category
    if len(state.objects) > 1:
        names["base"] = state.objects[1].category
    return task.instruction.format(**names)


def entities(state: SimState) -> List[Tuple[str, Tuple[float, float]]]:
    """Named things a question may refer to, the gripper included."""
    named = [(obj.category, obj.pos) for obj in state.objects]
    named += [(target.id, target.pos) for target in state.targets]
    named.append(("gripper", state.gripper))
    return named


def _fmt(position) -> str:
    return f"({position[0]:.2f}, {position[1]:.2f})"


def _general(state: SimState, task: TaskConfig, rng) -> InDomainQA:
    grip = "closed" if state.grip_closed else "open"
    parts = [f"The gripper is at {_fmt(state.gripper)} and is {grip}."]
    for obj in state.objects:
        where = "in the gripper" if obj.held else f"at {_fmt(obj.pos)}"
        parts.append(f"The {obj.category} is {where}.")
    for target in state.targets:
        parts.append(f"The {target.id} is at {_fmt(target.pos)}.")
    subgoal = subgoal_label(state, task)
    parts.append(f"Next, the robot should {subgoal}.")
    question = (
        f"The task is to {instruction_for(state, task)}. "
        "Describe the current scene and the next step of the plan."
    )
    return InDomainQA(task.name, QAType.GENERAL, question, " ".join(parts), {"subgoal": subgoal})


def _grounding(state: SimState, task: TaskConfig, rng) -> InDomainQA:
    named = entities(state)[:-1]
    index = int(rng.integers(len(named)))
    name, (x, y) = named[index]
    radius = (list(state.objects) + list(state.targets))[index].radius
    if rng.random() < 0.5:
        geometry = NormCoord(normalize_unit(x), normalize_unit(y))
        question = f"Point to the {name}."
    else:
        geometry = NormBox(
            normalize_unit(max(x - radius, 0.0)),
            normalize_unit(max(y - radius, 0.0)),
            normalize_unit(min(x + radius, 1.0)),
            normalize_unit(min(y + radius, 1.0)),
        )
        question = f"Give the bounding box of the {name}."
    return InDomainQA(
        task.name, QAType.GROUNDING, question, render_markup(geometry), {"entity": name}
    )


def _spatial(state: SimState, task: TaskConfig, rng) -> InDomainQA:
    named = entities(state)
    first, second = (int(i) for i in rng.choice(len(named), size=2, replace=False))
    (a, pa), (b, pb) = named[first], named[second]
    dx = pa[0] - pb[0]
    if rng.random() < 0.5 and dx != 0:
        question = f"Is the {a} to the left or to the right of the {b}?"
        answer = "left" if dx < 0 else "right"
    else:
        question = f"How far is the {a} from the {b}, in workspace units?"
        answer = f"{math.hypot(dx, pa[1] - pb[1]):.2f}"
    return InDomainQA(task.name, QAType.SPATIAL, question, answer, {"entities": [a, b]})


ANNOTATORS = {
    QAType.GENERAL: _general,
    QAType.GROUNDING: _grounding,
    QAType.SPATIAL: _spatial,
}


def annotate(state: SimState, task: TaskConfig, kind, rng: np.random.Generator) -> InDomainQA:
    try:
        kind = QAType(kind)
    except ValueError:
        raise UnknownKind(f"Unknown QA kind {kind!r}, expected one of {QAType.values()}")
    return ANNOTATORS[kind](state, task, rng)


def sample_annotation(scheme, task: TaskConfig, kind, index: int) -> Tuple[SimState, InDomainQA]:
    """QA about a state drawn from the ``index``-th expert episode of ``task``."""
    rng = scheme.rng(f"indomain:{task.name}", index)
    record = run_expert_episode(task, rng)
    state = record.states[int(rng.integers(len(record.states)))]
    return state, annotate(state, task, kind, rng)


def annotate_states(scheme, tasks, kinds, per_task: int, jobs: int = 1) -> List[dict]:
    """``per_task`` QA records per task, kinds taken round robin."""

    def one(item):
        task, index = item
        _state, qa = sample_annotation(scheme, task, kinds[index % len(kinds)], index)
        return as_dict(qa)

    items = [(task, index) for task in tasks for index in range(per_task)]
    return ordered_map(one, items, jobs)
