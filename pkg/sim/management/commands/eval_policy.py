from pathlib import Path

from django.conf import settings
from django.core.management import CommandError

from policy.checkpoints import load_checkpoint
from policy.policies import FlowPolicy
from sim.evaluation import ExpertPolicy, RandomPolicy, eval_policy
from sim.tasks import get_task
from vlaforge.commands import ForgeCommand
from vlaforge.utils import write_jsonl


class Command(ForgeCommand):
    help = "Closed-loop evaluation of a policy on a simulator task."

    def add_arguments(self, parser):
        parser.add_argument("--policy", choices=("flow", "expert", "random"), default="flow")
        parser.add_argument("--checkpoint", type=Path)
        parser.add_argument("--task", default="pick_place")
        parser.add_argument("--episodes", type=int, default=settings.SIM["eval_episodes"])
        parser.add_argument("--execute", type=int, default=settings.FLOW_POLICY["execute"])
        parser.add_argument("--solver", choices=("euler", "heun"), default="euler")
        parser.add_argument(
            "--integration-steps", type=int, default=settings.FLOW_POLICY["integration_steps"]
        )
        parser.add_argument("--out", type=Path, required=True, help="EpisodeRecord JSONL")

    def run(self, **options):
        horizon = settings.FLOW_POLICY["horizon"]
        if options["policy"] == "flow":
            if options["checkpoint"] is None:
                raise CommandError("--checkpoint is required for --policy flow", returncode=2)
            net, scaler, header = load_checkpoint(options["checkpoint"])
            policy = FlowPolicy(
                net,
                scaler,
                steps=options["integration_steps"],
                solver=options["solver"],
                negated_field=header.get("train", {}).get("negated_field", False),
            )
        elif options["policy"] == "expert":
            policy = ExpertPolicy(horizon)
        else:
            policy = RandomPolicy(horizon)

        task = get_task(options["task"])
        result = eval_policy(
            policy, task, options["episodes"], self.scheme, options["execute"], options["jobs"]
        )
        write_jsonl(options["out"], (r.to_json() for r in result.records))
        self.record_output(options["out"], schema="episode")
        self.stdout.write(f"{task.name}: success rate {result.success_rate:.3f}")
        self.finish(
            options["out"],
            episodes=result.episodes,
            successes=result.successes,
            **result.counters,
        )
