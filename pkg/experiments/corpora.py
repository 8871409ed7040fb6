"""
Pretraining corpora as ``(context vector, answer embedding)`` pairs.

In-domain pairs come from the simulator annotator, so their contexts are real
policy observations. Out-of-domain pairs come from the grounding and spatial
engines run on synthetic images and rooms; their geometry is written into the
same context layout, but with no task flag set.
"""
import hashlib
import math
import re
from typing import List, Sequence, Tuple

import numpy as np

from grounding.models import TaskKind
from grounding.providers import get_provider
from grounding.services import generate_grounding_samples
from grounding.synthetic import synthetic_corpus
from sim.annotate import sample_annotation
from sim.models import TaskKind as SimTaskKind
from sim.observations import CONTEXT_DIM, observe
from sim.tasks import get_task
from spatial.services import generate_scene_questions
from spatial.synthetic import synthetic_scenes
from vlaforge.seeding import SeedScheme

__all__ = ("EMBED_DIM", "Pair", "embed_answer", "in_domain_pairs", "out_domain_pairs")

EMBED_DIM = 16
NUMBER_SLOTS = 4
NUMBER = re.compile(r"-?\d+(?:\.\d+)?")
WORD = re.compile(r"[a-z]+")
# first context slot after the task flags
GEOMETRY_OFFSET = len(SimTaskKind)

Pair = Tuple[np.ndarray, np.ndarray]


def embed_answer(text: str) -> np.ndarray:
    """Leading numbers (log-squashed) plus a signed hashed bag of words."""
    vector = np.zeros(EMBED_DIM, dtype=np.float64)
    for slot, number in enumerate(NUMBER.findall(text)[:NUMBER_SLOTS]):
        value = float(number)
        vector[slot] = math.copysign(math.log1p(abs(value)), value) / 7.0
    words = WORD.findall(text.lower())
    buckets = EMBED_DIM - NUMBER_SLOTS
    for word in words:
        digest = hashlib.sha1(word.encode("utf-8")).digest()
        sign = 1.0 if digest[4] & 1 else -1.0
        vector[NUMBER_SLOTS + int.from_bytes(digest[:4], "big") % buckets] += sign
    if words:
        vector[NUMBER_SLOTS:] /= math.sqrt(len(words))
    return vector


def in_domain_pairs(
    scheme: SeedScheme, task_names: Sequence[str], kinds: Sequence[str], size: int
) -> List[Pair]:
    tasks = [get_task(name) for name in task_names]
    pairs = []
    for index in range(size):
        task = tasks[index % len(tasks)]
        state, qa = sample_annotation(scheme, task, kinds[index % len(kinds)], index)
        pairs.append((observe(state, task).context, embed_answer(qa.answer)))
    return pairs


def _geometry_context(values: Sequence[float]) -> np.ndarray:
    context = np.zeros(CONTEXT_DIM, dtype=np.float64)
    free = CONTEXT_DIM - GEOMETRY_OFFSET
    for slot, value in enumerate(list(values)[:free]):
        context[GEOMETRY_OFFSET + slot] = value
    return context


def _grounding_pairs(scheme: SeedScheme, count: int) -> List[Pair]:
    records = synthetic_corpus(scheme.child("out-domain-masks"), count, max_side=48)
    mix = {kind: 1.0 for kind in TaskKind}
    pairs = []
    samples = generate_grounding_samples(
        records, get_provider("template"), mix, scheme.child("out-domain-grounding")
    )
    for sample in samples:
        geometry = [v / 1000.0 for v in sample.norm_geometry]
        pairs.append((_geometry_context(geometry), embed_answer(sample.answer)))
    return pairs


def _spatial_pairs(scheme: SeedScheme, count: int) -> List[Pair]:
    pairs = []
    for graph in synthetic_scenes(scheme.child("out-domain-scenes"), count):
        low = [c - d / 2 for c, d in zip(graph.room_center, graph.room_dims)]
        rng = scheme.rng("out-domain-spatial", graph.scene_id)
        for qa in generate_scene_questions(graph, 1, rng):
            ids = (qa.metadata or {}).get("ids") or (qa.metadata or {}).get("candidates") or []
            values = []
            for object_id in ids[:2]:
                center = graph.get(object_id).center
                x = (center[0] - low[0]) / graph.room_dims[0]
                y = (center[1] - low[1]) / graph.room_dims[1]
                values += [x, y, 0.0]
            pairs.append((_geometry_context(values), embed_answer(qa.answer)))
    return pairs


def out_domain_pairs(scheme: SeedScheme, kinds: Sequence[str], size: int) -> List[Pair]:
    """Half grounding, half spatial when both kinds are asked for."""
    builders = {"grounding": _grounding_pairs, "spatial": _spatial_pairs}
    share = max(1, size // len(kinds))
    pairs = []
    for kind in kinds:
        pairs.extend(builders[kind](scheme, share)[:share])
    return pairs[:size]
