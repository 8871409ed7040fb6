from pathlib import Path

from django.conf import settings

from policy.checkpoints import save_checkpoint, write_loss_curve
from policy.network import NetConfig
from policy.services import fit_flow_policy, windows_from_records
from policy.training import NOISE_MODES, TAU_SCHEDULES, TrainConfig
from sim.models import EpisodeRecord
from vlaforge.commands import ForgeCommand
from vlaforge.config import parse_bool
from vlaforge.utils import read_jsonl

TRAIN_KEYS = ("lr", "batch_size", "steps", "tau_schedule", "noise", "weight_decay")


class Command(ForgeCommand):
    help = "Train the flow-matching action expert on expert demonstrations."
    config_section = "train"

    def add_arguments(self, parser):
        parser.add_argument("--demos", type=Path, required=True, help="EpisodeRecord JSONL")
        parser.add_argument("--out", type=Path, required=True, help="Checkpoint path")
        parser.add_argument("--loss-csv", type=Path)
        parser.add_argument("--steps", type=int)
        parser.add_argument("--batch-size", type=int)
        parser.add_argument("--lr", type=float)
        parser.add_argument("--weight-decay", type=float)
        parser.add_argument("--tau-schedule", choices=TAU_SCHEDULES)
        parser.add_argument("--noise", choices=NOISE_MODES)
        parser.add_argument("--negated-field", action="store_true", default=None)
        parser.add_argument(
            "--train-context-encoder",
            action="store_true",
            default=None,
            help="Update the context encoder too (frozen by default)",
        )

    def run(self, **options):
        overrides = {key: options[key] for key in TRAIN_KEYS}
        overrides["negated_field"] = options["negated_field"]
        overrides["train_context_encoder"] = options["train_context_encoder"]
        values = self.load_config(options, overrides).get("train", {})
        defaults = settings.FLOW_POLICY
        train_cfg = TrainConfig(
            lr=float(values.get("lr", defaults["lr"])),
            beta1=defaults["beta1"],
            beta2=defaults["beta2"],
            eps=defaults["eps"],
            weight_decay=float(values.get("weight_decay", defaults["weight_decay"])),
            batch_size=int(values.get("batch_size", defaults["batch_size"])),
            steps=int(values.get("steps", defaults["steps"])),
            tau_schedule=values.get("tau_schedule", "uniform"),
            noise=values.get("noise", "fresh"),
            negated_field=parse_bool(values.get("negated_field", False)),
            freeze_context_encoder=not parse_bool(values.get("train_context_encoder", False)),
        )
        net_cfg = NetConfig(horizon=defaults["horizon"])

        records = [EpisodeRecord.from_json(row) for row in read_jsonl(options["demos"])]
        windows = windows_from_records(records, net_cfg.horizon)
        net, scaler, result = fit_flow_policy(windows, net_cfg, train_cfg, self.scheme)

        header = {"train": train_cfg.to_json(), "seed": options["seed"], "windows": len(windows)}
        save_checkpoint(options["out"], net, scaler, header)
        loss_csv = options["loss_csv"] or options["out"].with_suffix(".loss.csv")
        write_loss_curve(loss_csv, result.losses)
        self.record_output(options["out"], schema="checkpoint")
        self.record_output(loss_csv, schema="loss_curve")
        self.finish(
            options["out"],
            episodes=len(records),
            windows=len(windows),
            steps=result.steps,
            clipped=scaler.clipped,
        )
