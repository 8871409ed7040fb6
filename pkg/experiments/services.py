"""
Initialization matrix: train the same flow policy from differently pretrained
context encoders and measure how many optimizer steps each needs to reach a
closed-loop success threshold.
"""
import csv
import io
import logging
import statistics
from collections import defaultdict
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from experiments.corpora import in_domain_pairs, out_domain_pairs
from experiments.exceptions import InconsistentReports, MissingThresholdCrossing
from experiments.models import InitVariant, MatrixConfig, RunReport, get_variant
from experiments.pretraining import PretrainConfig, pretrain_context_encoder
from policy.network import NetConfig, VectorFieldNet
from policy.normalization import ActionScaler
from policy.policies import FlowPolicy
from policy.services import fit_flow_policy, windows_from_records
from policy.training import TrainConfig
from sim.demos import run_expert_episode
from sim.evaluation import ExpertPolicy, eval_policy
from sim.tasks import get_task
from vlaforge.parallel import ordered_map
from vlaforge.seeding import SeedScheme

__all__ = (
    "SUMMARY_FIELDS",
    "CellResult",
    "collect_demos",
    "compare",
    "run_cell",
    "run_matrix",
    "steps_to_threshold",
    "summary_csv",
    "summary_markdown",
)

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ("rank", "variant", "seeds", "censored", "median_steps", "mean_final_success")


class CellResult(NamedTuple):
    report: RunReport
    losses: List[float]


def steps_to_threshold(
    eval_steps: Sequence[int],
    success: Sequence[float],
    threshold: float,
    rolling: int = 1,
    strict: bool = False,
) -> Optional[int]:
    """
    First evaluated step whose rolling mean (over the last ``rolling``
    evaluations) reaches ``threshold``. None when the run never gets there,
    unless ``strict``.
    """
    if len(eval_steps) != len(success):
        raise ValueError("eval_steps and success differ in length")
    for index in range(len(success)):
        if index + 1 < rolling:
            continue
        window = success[index + 1 - rolling : index + 1]
        if sum(window) / rolling >= threshold:
            return int(eval_steps[index])
    if strict:
        raise MissingThresholdCrossing(
            f"Success never reached {threshold} within {eval_steps[-1] if eval_steps else 0} steps"
        )
    return None


def collect_demos(scheme: SeedScheme, task_names: Sequence[str], episodes: int):
    """Expert demonstrations; depend on the seed only, never on the variant."""
    records = []
    for name in task_names:
        task = get_task(name)
        records.extend(run_expert_episode(task, scheme.rng(f"demo:{name}", i)) for i in range(episodes))
    return records


def _pretrain_corpus(variant: InitVariant, scheme: SeedScheme, cfg: MatrixConfig):
    if variant.pretrain_corpus == "in_domain":
        return in_domain_pairs(scheme.child("in-domain-corpus"), cfg.tasks, variant.kinds, cfg.corpus_size)
    return out_domain_pairs(scheme.child("out-domain-corpus"), variant.kinds, cfg.corpus_size)


def _evaluate(policy, cfg: MatrixConfig, scheme: SeedScheme) -> Dict[str, float]:
    eval_scheme = scheme.child("eval")
    return {
        name: eval_policy(policy, get_task(name), cfg.eval_episodes, eval_scheme).success_rate
        for name in cfg.tasks
    }


def run_cell(
    variant_name: str,
    seed: int,
    cfg: MatrixConfig,
    net_cfg: Optional[NetConfig] = None,
    progress: Optional[Callable[[str], None]] = None,
) -> CellResult:
    """One (variant, seed) cell of the matrix."""
    variant = get_variant(variant_name)
    scheme = SeedScheme(seed)
    net_cfg = net_cfg or NetConfig()

    if variant.reference:
        rates = _evaluate(ExpertPolicy(net_cfg.horizon), cfg, scheme)
        mean = sum(rates.values()) / len(rates)
        report = RunReport(
            variant=variant.name,
            seed=seed,
            tasks=list(cfg.tasks),
            threshold=cfg.threshold,
            success_rate=rates,
            censored=mean < cfg.threshold,
            steps_to_threshold=0 if mean >= cfg.threshold else None,
            eval_steps=[0],
            eval_success=[mean],
        )
        return CellResult(report, [])

    windows = windows_from_records(collect_demos(scheme, cfg.tasks, cfg.demo_episodes), net_cfg.horizon)
    net = VectorFieldNet(net_cfg, scheme.torch_generator("policy-init"))
    if variant.pretrain_corpus is not None:
        corpus = _pretrain_corpus(variant, scheme, cfg)
        pretrain_context_encoder(
            net.context_encoder,
            corpus,
            PretrainConfig(steps=cfg.pretrain_steps, lr=cfg.pretrain_lr, batch_size=cfg.batch_size),
            scheme.torch_generator("pretrain"),
        )

    # fit_flow_policy fits the same scaler from the same windows
    scaler = ActionScaler.fit(np.stack([chunk for _, chunk in windows]))
    eval_steps: List[int] = []
    eval_success: List[float] = []
    rates: Dict[str, float] = {}

    def checkpoint(step: int, current: VectorFieldNet):
        if step % cfg.eval_every and step != cfg.train_steps:
            return
        current.eval()
        rates.clear()
        rates.update(_evaluate(FlowPolicy(current, scaler), cfg, scheme))
        current.train()
        eval_steps.append(step)
        eval_success.append(sum(rates.values()) / len(rates))
        if progress is not None:
            progress(f"{variant.name} seed {seed} step {step}: success {eval_success[-1]:.3f}")

    train_cfg = TrainConfig(
        lr=cfg.lr, batch_size=cfg.batch_size, steps=cfg.train_steps, log_every=0
    )
    _, _, result = fit_flow_policy(windows, net_cfg, train_cfg, scheme, net=net, callback=checkpoint)
    crossing = steps_to_threshold(eval_steps, eval_success, cfg.threshold, cfg.rolling)
    if crossing is None:
        logger.warning(
            f"{variant.name} seed {seed}: censored, never reached {cfg.threshold} in {cfg.train_steps} steps"
        )
    logger.info(
        f"{variant.name} seed {seed}: final loss {result.losses[-1]:.5f}, steps to threshold {crossing}"
    )
    report = RunReport(
        variant=variant.name,
        seed=seed,
        tasks=list(cfg.tasks),
        threshold=cfg.threshold,
        success_rate=dict(rates),
        censored=crossing is None,
        steps_to_threshold=crossing,
        eval_steps=eval_steps,
        eval_success=eval_success,
    )
    return CellResult(report, result.losses)


def run_matrix(
    cfg: MatrixConfig,
    net_cfg: Optional[NetConfig] = None,
    jobs: int = 1,
    on_cell: Optional[Callable[[CellResult], None]] = None,
) -> List[CellResult]:
    """
    Every (variant, seed) cell, in ``cfg.variants`` x ``cfg.seeds`` order.
    ``on_cell`` sees each cell as soon as it finishes.
    """

    def one(cell):
        result = run_cell(cell[0], cell[1], cfg, net_cfg)
        if on_cell is not None:
            on_cell(result)
        return result

    cells = [(variant, seed) for variant in cfg.variants for seed in cfg.seeds]
    return ordered_map(one, cells, jobs)


def _check_consistent(reports: Sequence[RunReport], threshold: float):
    if not reports:
        raise InconsistentReports("No reports to compare")
    for report in reports:
        if report.threshold != threshold:
            raise InconsistentReports(
                f"{report.variant} seed {report.seed} used threshold {report.threshold}, expected {threshold}"
            )
    task_sets = {tuple(report.tasks) for report in reports}
    if len(task_sets) > 1:
        raise InconsistentReports(f"Reports cover different task sets: {sorted(task_sets)}")
    seen = set()
    for report in reports:
        key = (report.variant, report.seed)
        if key in seen:
            raise InconsistentReports(f"Duplicate report for {report.variant} seed {report.seed}")
        seen.add(key)


def compare(reports: Sequence[RunReport], threshold: Optional[float] = None) -> List[dict]:
    """
    One summary row per variant, ranked by: any censored seed last, then
    median steps to threshold, then mean final success (higher first), then name.
    """
    threshold = reports[0].threshold if threshold is None and reports else threshold
    _check_consistent(reports, threshold)
    grouped: Dict[str, List[RunReport]] = defaultdict(list)
    for report in reports:
        grouped[report.variant].append(report)

    rows = []
    for variant, runs in grouped.items():
        crossed = [r.steps_to_threshold for r in runs if r.steps_to_threshold is not None]
        censored = sum(r.censored for r in runs)
        rows.append(
            {
                "variant": variant,
                "seeds": len(runs),
                "censored": censored,
                "median_steps": statistics.median(crossed) if crossed else None,
                "mean_final_success": round(sum(r.final_success for r in runs) / len(runs), 4),
            }
        )

    def key(row) -> Tuple:
        median = row["median_steps"] if row["median_steps"] is not None else float("inf")
        return (row["censored"] > 0, median, -row["mean_final_success"], row["variant"])

    rows.sort(key=key)
    for rank, row in enumerate(rows, start=1):
        row["rank"] = rank
    return rows


def summary_csv(rows: Sequence[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row[k] is None else row[k] for k in SUMMARY_FIELDS})
    return buffer.getvalue()


def summary_markdown(rows: Sequence[dict], threshold: float) -> str:
    lines = [
        f"Steps to {threshold:.0%} success",
        "",
        "| " + " | ".join(SUMMARY_FIELDS) + " |",
        "|" + "---|" * len(SUMMARY_FIELDS),
    ]
    for row in rows:
        cells = ["-" if row[k] is None else str(row[k]) for k in SUMMARY_FIELDS]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
