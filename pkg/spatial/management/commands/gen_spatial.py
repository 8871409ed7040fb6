from collections import Counter
from pathlib import Path

from django.conf import settings
from django.core.management import CommandError

from spatial.services import generate_scene_questions, load_scene
from spatial.synthetic import synthetic_scenes
from vlaforge.commands import ForgeCommand
from vlaforge.config import parse_bool
from vlaforge.parallel import ordered_map
from vlaforge.utils import as_dict, read_jsonl, write_jsonl


class Command(ForgeCommand):
    help = "Turn 3D scene annotations into spatial-reasoning QA (JSONL)."
    config_section = "spatial"

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--in", dest="input", type=Path)
        source.add_argument("--synthetic", type=int, help="Generate N random scenes instead")
        parser.add_argument("--out", type=Path, required=True)
        parser.add_argument("--per-scene", type=int)
        parser.add_argument("--multiple-choice", action="store_true", default=None)

    def run(self, **options):
        overrides = {
            "per_scene": options["per_scene"],
            "multiple_choice": options["multiple_choice"],
        }
        values = {**settings.SPATIAL, **self.load_config(options, overrides)["spatial"]}
        per_scene = int(values["per_scene"])
        if per_scene < 1:
            raise CommandError(f"--per-scene must be positive, got {per_scene}", returncode=2)
        multiple_choice = parse_bool(values["multiple_choice"])

        if options["input"] is not None:
            scenes = [load_scene(row) for row in read_jsonl(options["input"])]
        else:
            scenes = synthetic_scenes(self.scheme, options["synthetic"])

        counters = Counter(scenes=len(scenes))

        def questions_for(graph):
            local = Counter()
            rng = self.scheme.rng("spatial", graph.scene_id)
            qas = generate_scene_questions(graph, per_scene, rng, multiple_choice, local)
            return qas, local

        rows = []
        for qas, local in ordered_map(questions_for, scenes, options["jobs"]):
            counters.update(local)
            rows.extend(as_dict(qa) for qa in qas)
        counters["samples"] = write_jsonl(options["out"], rows)
        self.record_output(options["out"], schema="spatial")
        self.finish(options["out"], **counters)
