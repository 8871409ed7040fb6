from collections import Counter
from pathlib import Path

from django.conf import settings
from django.core.management import CommandError

from grounding.models import MaskRecord
from grounding.providers import get_provider
from grounding.services import GroundingEngine, parse_mix, sample_candidates, weight_by_quality
from grounding.synthetic import synthetic_corpus
from vlaforge.commands import ForgeCommand
from vlaforge.utils import read_jsonl, write_jsonl


class Command(ForgeCommand):
    help = "Turn mask records into box/point/text grounding QA (JSONL)."
    config_section = "grounding"

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--in", dest="input", type=Path)
        source.add_argument("--synthetic", type=int, help="Generate N synthetic masks instead")
        parser.add_argument("--out", type=Path, required=True)
        parser.add_argument("--threshold", type=float)
        parser.add_argument("--mix")
        parser.add_argument("--limit", type=int)
        parser.add_argument("--candidates", type=int)
        parser.add_argument("--quality-mode", choices=("exclude", "weight"))
        parser.add_argument("--low-quality-weight", type=float)
        parser.add_argument("--point-mode", choices=("uniform", "centroid"))
        parser.add_argument("--provider", default="template")

    def run(self, **options):
        overrides = {
            key: options[key]
            for key in ("threshold", "mix", "quality_mode", "low_quality_weight", "point_mode")
        }
        values = {**settings.GROUNDING, **self.load_config(options, overrides)["grounding"]}
        threshold = float(values["threshold"])
        if not 0.0 <= threshold <= 1.0:
            raise CommandError(f"--threshold must be in [0, 1], got {threshold}", returncode=2)

        if options["input"] is not None:
            records = [MaskRecord.from_json(row) for row in read_jsonl(options["input"])]
        else:
            records = synthetic_corpus(self.scheme, options["synthetic"])
        if not records:
            raise CommandError("No mask records in input", returncode=1)

        candidates = sample_candidates(records, options["candidates"], self.scheme)
        if values["quality_mode"] == "weight":
            kept = weight_by_quality(
                candidates, threshold, float(values["low_quality_weight"]), self.scheme
            )
        else:
            kept = [(i, r) for i, r in candidates if r.quality_score >= threshold]

        counters = Counter(
            records=len(records), candidates=len(candidates), kept=len(kept)
        )
        engine = GroundingEngine(
            provider=get_provider(options["provider"]),
            mix=parse_mix(values["mix"]),
            scheme=self.scheme,
            point_mode=values["point_mode"],
            counters=counters,
        )
        write_jsonl(
            options["out"],
            engine.generate(kept, jobs=options["jobs"], limit=options["limit"]),
        )
        self.record_output(options["out"], schema="grounding")
        self.finish(options["out"], **counters)
