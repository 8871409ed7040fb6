from collections import Counter
from pathlib import Path

from sim.annotate import annotate_states
from sim.models import QAType
from sim.tasks import get_task, load_tasks
from vlaforge.commands import ForgeCommand
from vlaforge.config import parse_list
from vlaforge.utils import write_jsonl


class Command(ForgeCommand):
    help = "Annotate simulator states with general, grounding and spatial QA (JSONL)."

    def add_arguments(self, parser):
        parser.add_argument("--tasks", help="Comma separated task names, default all")
        parser.add_argument("--per-task", type=int, default=100)
        parser.add_argument(
            "--kinds", default=",".join(QAType.values()), help="Subset of general,grounding,spatial"
        )
        parser.add_argument("--out", type=Path, required=True)

    def run(self, **options):
        names = parse_list(options["tasks"]) or sorted(load_tasks())
        tasks = [get_task(name) for name in names]
        kinds = parse_list(options["kinds"])
        records = annotate_states(self.scheme, tasks, kinds, options["per_task"], options["jobs"])
        counters = Counter(record["kind"] for record in records)
        counters["samples"] = write_jsonl(options["out"], records)
        self.record_output(options["out"], schema="indomain")
        self.finish(options["out"], **counters)
