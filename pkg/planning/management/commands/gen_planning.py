from collections import Counter
from pathlib import Path

from django.conf import settings

from planning.agents import get_agent
from planning.environments import get_environment
from planning.services import filter_successful, rollout, to_planning_samples
from vlaforge.commands import ForgeCommand
from vlaforge.config import parse_list
from vlaforge.parallel import ordered_map
from vlaforge.utils import as_dict, write_jsonl


class Command(ForgeCommand):
    help = "Roll out planning tasks and keep successful trajectories as reasoning-step samples."
    config_section = "planning"

    def add_arguments(self, parser):
        parser.add_argument("--env", default="toy", choices=sorted(settings.PLANNING_ENVIRONMENTS))
        parser.add_argument("--agent", default="expert", choices=sorted(settings.PLANNING_AGENTS))
        parser.add_argument("--episodes", type=int, required=True)
        parser.add_argument("--tasks", help="Comma separated task names, default all")
        parser.add_argument("--epsilon", type=float)
        parser.add_argument("--out", type=Path, required=True)
        parser.add_argument("--archive", type=Path, help="Also write every trajectory here")

    def run(self, **options):
        values = self.load_config(options, {"epsilon": options["epsilon"]}).get("planning", {})
        epsilon = values.get("epsilon")
        agent = get_agent(options["agent"], epsilon=float(epsilon) if epsilon else None)
        tasks = parse_list(options["tasks"]) or sorted(get_environment(options["env"]).tasks)

        def episode(index):
            env = get_environment(options["env"])
            task = env.get_task(tasks[index % len(tasks)])
            return rollout(env, agent, task, self.scheme.rng("planning", index))

        trajectories = list(ordered_map(episode, range(options["episodes"]), options["jobs"]))
        successful = filter_successful(trajectories)
        counters = Counter(
            episodes=len(trajectories),
            successful=len(successful),
            failed=len(trajectories) - len(successful),
        )
        samples = [as_dict(s) for t in successful for s in to_planning_samples(t)]
        counters["samples"] = write_jsonl(options["out"], samples)
        self.record_output(options["out"], schema="planning")
        if options["archive"] is not None:
            write_jsonl(options["archive"], (t.to_json() for t in trajectories))
            self.record_output(options["archive"], schema="trajectory")
        self.finish(options["out"], **counters)
