import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import islice
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from geometry.coords import normalize_bbox, normalize_point
from geometry.exceptions import EmptyMask
from geometry.masks import centroid_point, mask_to_bbox, sample_point_in_mask
from grounding.exceptions import InvalidMix
from grounding.markup import render_markup
from grounding.models import GroundingSample, MaskRecord, TaskKind
from grounding.providers import BaseCaptionProvider
from grounding.templates import QUESTION_TEMPLATES
from vlaforge.config import parse_weights
from vlaforge.parallel import ordered_map
from vlaforge.seeding import SeedScheme

__all__ = (
    "GroundingEngine",
    "filter_by_quality",
    "generate_grounding_samples",
    "parse_mix",
    "sample_candidates",
    "weight_by_quality",
)

logger = logging.getLogger(__name__)

IndexedRecord = Tuple[int, MaskRecord]


def parse_mix(value: str) -> Dict[TaskKind, float]:
    try:
        weights = parse_weights(value, ("box", "point", "text"))
    except ValueError as exc:
        raise InvalidMix(str(exc)) from exc
    if any(weight < 0 for weight in weights.values()):
        raise InvalidMix(f"Negative weight in mix {value!r}")
    if not np.isclose(sum(weights.values()), 1.0, rtol=0.0, atol=1e-9):
        raise InvalidMix(f"Mix weights must sum to 1, got {sum(weights.values())}")
    return {TaskKind.from_mix_key(key): weight for key, weight in weights.items()}


def filter_by_quality(records: Iterable[MaskRecord], threshold: float) -> List[MaskRecord]:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"Quality threshold {threshold} outside [0, 1]")
    return [record for record in records if record.quality_score >= threshold]


def weight_by_quality(
    records: Iterable[IndexedRecord],
    threshold: float,
    low_weight: float,
    scheme: SeedScheme,
) -> List[IndexedRecord]:
    """Keep high-quality records, keep the rest with probability ``low_weight``."""
    kept = []
    for index, record in records:
        if record.quality_score >= threshold:
            kept.append((index, record))
        elif scheme.rng("quality", index).random() < low_weight:
            kept.append((index, record))
    return kept


def sample_candidates(
    records: Sequence[MaskRecord], candidates: Optional[int], scheme: SeedScheme
) -> List[IndexedRecord]:
    """Seeded candidate subset, returned in input order with original indices."""
    if candidates is None or candidates >= len(records):
        return list(enumerate(records))
    picked = scheme.rng("candidates").choice(len(records), size=candidates, replace=False)
    return [(int(index), records[int(index)]) for index in np.sort(picked)]


@dataclass
class GroundingEngine:
    provider: BaseCaptionProvider
    mix: Dict[TaskKind, float]
    scheme: SeedScheme
    point_mode: str = "uniform"
    counters: Counter = field(default_factory=Counter)

    def __post_init__(self):
        if self.point_mode not in ("uniform", "centroid"):
            raise ValueError(f"Unknown point mode {self.point_mode!r}")
        self.kinds = [kind for kind in TaskKind if self.mix.get(kind, 0.0) > 0.0]
        weights = np.array([self.mix[kind] for kind in self.kinds])
        self.cumulative = np.cumsum(weights) / weights.sum()

    def choose_kind(self, rng: np.random.Generator) -> TaskKind:
        position = int(np.searchsorted(self.cumulative, rng.random(), side="right"))
        return self.kinds[min(position, len(self.kinds) - 1)]

    def derive(self, index: int, record: MaskRecord) -> Optional[GroundingSample]:
        """One sample for one record, a pure function of (global seed, index, record)."""
        rng = self.scheme.rng("grounding", index)
        kind = self.choose_kind(rng)
        templates = QUESTION_TEMPLATES[kind]
        template = templates[int(rng.integers(len(templates)))]

        box = mask_to_bbox(record.mask)
        description = record.caption or self.provider.describe(
            record.image_id, box, hint=record.category
        )
        description = self.provider.refine(description)
        if description is None:
            return None

        if kind is TaskKind.POINT_FROM_TEXT:
            if self.point_mode == "centroid":
                point = centroid_point(record.mask)
            else:
                point = sample_point_in_mask(record.mask, rng)
            geometry = normalize_point(point, record.width, record.height)
        else:
            geometry = normalize_bbox(box, record.width, record.height)

        markup = render_markup(geometry)
        if kind is TaskKind.TEXT_FROM_COORDS:
            question, answer = template.format(markup=markup), description
        else:
            question, answer = template.format(description=description), markup
        return GroundingSample(
            image_id=record.image_id,
            task_kind=kind,
            question=question,
            answer=answer,
            norm_geometry=geometry.as_list(),
            record_index=index,
        )

    def _derive_safely(self, item: IndexedRecord):
        index, record = item
        try:
            return self.derive(index, record), None
        except EmptyMask:
            return None, "empty_mask"

    def generate(
        self,
        records: Iterable[IndexedRecord],
        jobs: int = 1,
        limit: Optional[int] = None,
        chunk_size: int = 256,
    ) -> Iterator[GroundingSample]:
        emitted = 0
        records = iter(records)
        while limit is None or emitted < limit:
            chunk = list(islice(records, chunk_size))
            if not chunk:
                break
            for (index, record), (sample, skipped) in zip(
                chunk, ordered_map(self._derive_safely, chunk, jobs)
            ):
                if skipped:
                    self.counters[skipped] += 1
                    logger.warning(f"Skipping record {index} ({record.image_id}): {skipped}")
                    continue
                if sample is None:
                    self.counters["rejected_caption"] += 1
                    continue
                self.counters[sample.task_kind.value] += 1
                self.counters["samples"] += 1
                emitted += 1
                yield sample
                if limit is not None and emitted >= limit:
                    return


def generate_grounding_samples(
    records: Sequence[MaskRecord],
    provider: BaseCaptionProvider,
    mix: Dict[TaskKind, float],
    scheme: SeedScheme,
    point_mode: str = "uniform",
    jobs: int = 1,
    limit: Optional[int] = None,
    counters: Optional[Counter] = None,
) -> Iterator[GroundingSample]:
    if not records:
        raise ValueError("No mask records to generate from")
    engine = GroundingEngine(provider, mix, scheme, point_mode)
    if counters is not None:
        engine.counters = counters
    return engine.generate(enumerate(records), jobs=jobs, limit=limit)
