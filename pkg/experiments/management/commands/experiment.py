import json
import logging
from pathlib import Path

from django.conf import settings

from experiments.models import MatrixConfig, RunReport
from experiments.services import compare, run_matrix, summary_csv, summary_markdown
from policy.checkpoints import write_loss_curve
from vlaforge.commands import ForgeCommand
from vlaforge.utils import as_dict, write_jsonl

logger = logging.getLogger(__name__)

CELL_GLOB = "*__seed*.json"


def cell_stem(report: RunReport) -> str:
    return f"{report.variant}__seed{report.seed}"


class Command(ForgeCommand):
    help = "Run the initialization matrix and rank variants by steps to the success threshold."
    config_section = "experiment"

    def add_arguments(self, parser):
        parser.add_argument("--matrix", type=Path, help="Matrix config file, same as --config")
        parser.add_argument("--out", type=Path, required=True, help="Report directory")
        parser.add_argument("--threshold", type=float)
        parser.add_argument("--variants")
        parser.add_argument("--seeds")
        parser.add_argument(
            "--compare-only",
            action="store_true",
            help="Re-rank the per-cell reports already in --out without training",
        )

    def run(self, **options):
        options["config"] = options["matrix"] or options["config"]
        overrides = {key: options[key] for key in ("threshold", "variants", "seeds")}
        section = self.load_config(options, overrides).get("experiment", {})
        values = {key: str(value) for key, value in settings.EXPERIMENT.items()}
        values.update(section)
        cfg = MatrixConfig.from_section(values)
        out = self.out = options["out"]
        out.mkdir(parents=True, exist_ok=True)

        if options["compare_only"]:
            reports = [
                RunReport.from_json(json.loads(path.read_text(encoding="utf-8")))
                for path in sorted(out.glob(CELL_GLOB))
            ]
            logger.info(f"Comparing {len(reports)} existing reports from {out}")
        else:
            cells = run_matrix(cfg, jobs=options["jobs"], on_cell=self.write_cell)
            reports = [cell.report for cell in cells]

        reports_path = out / "reports.jsonl"
        write_jsonl(reports_path, reports)
        rows = compare(reports, cfg.threshold)
        (out / "summary.csv").write_text(summary_csv(rows), encoding="utf-8")
        (out / "summary.md").write_text(summary_markdown(rows, cfg.threshold), encoding="utf-8")
        self.stdout.write(summary_markdown(rows, cfg.threshold))

        self.record_output(reports_path, schema="run_report")
        self.record_output(out / "summary.csv")
        self.record_output(out / "summary.md")
        self.finish(
            out,
            reports=len(reports),
            variants=len(rows),
            censored=sum(r.censored for r in reports),
        )

    def write_cell(self, cell):
        report = cell.report
        report.config_hash = self.manifest.config_hash
        out = self.out
        if cell.losses:
            curve = out / f"{cell_stem(report)}.loss.csv"
            write_loss_curve(curve, cell.losses)
            report.loss_curve = curve.name
        path = out / f"{cell_stem(report)}.json"
        path.write_text(json.dumps(as_dict(report), indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote {path}")

