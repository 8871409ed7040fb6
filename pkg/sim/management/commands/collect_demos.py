from collections import Counter
from pathlib import Path

from django.conf import settings

from sim.demos import run_expert_episode
from sim.tasks import get_task
from vlaforge.commands import ForgeCommand
from vlaforge.parallel import ordered_map
from vlaforge.utils import write_jsonl


class Command(ForgeCommand):
    help = "Record scripted-expert episodes as EpisodeRecord JSONL."
    config_section = "demos"

    def add_arguments(self, parser):
        parser.add_argument("--task", default="pick_place")
        parser.add_argument("--episodes", type=int)
        parser.add_argument("--out", type=Path, required=True)

    def run(self, **options):
        values = self.load_config(options, {"episodes": options["episodes"]}).get("demos", {})
        episodes = int(values.get("episodes", settings.SIM["demo_episodes"]))
        task = get_task(options["task"])

        def episode(index):
            return run_expert_episode(task, self.scheme.rng(f"demo:{task.name}", index))

        records = ordered_map(episode, range(episodes), options["jobs"])
        counters = Counter(
            episodes=len(records),
            successful=sum(r.success for r in records),
            steps=sum(r.steps_used for r in records),
        )
        write_jsonl(options["out"], (r.to_json() for r in records))
        self.record_output(options["out"], schema="episode")
        self.finish(options["out"], **counters)
