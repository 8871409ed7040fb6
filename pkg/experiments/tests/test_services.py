import json
import statistics
from dataclasses import replace

import pytest
from django.conf import settings as django_settings
from django.core.management import call_command
from hypothesis import given, settings
from hypothesis import strategies as st

from experiments.exceptions import InconsistentReports, MissingThresholdCrossing, UnknownVariant
from experiments.models import VARIANTS, MatrixConfig, RunReport
from experiments.services import (
    compare,
    run_cell,
    run_matrix,
    steps_to_threshold,
    summary_csv,
    summary_markdown,
)
from policy.network import NetConfig
from vlaforge.config import read_config
from vlaforge.utils import as_dict

SMALL = NetConfig(width=16, heads=2, depth=1, context_tokens=2, tau_dim=8)

TINY = MatrixConfig(
    variants=("random", "in_domain"),
    tasks=("reach",),
    seeds=(0, 1),
    eval_every=2,
    eval_episodes=2,
    train_steps=4,
    batch_size=8,
    demo_episodes=2,
    pretrain_steps=3,
    corpus_size=8,
)


def report(variant, seed, steps, success, threshold=0.8, tasks=("reach",)):
    return RunReport(
        variant=variant,
        seed=seed,
        tasks=list(tasks),
        threshold=threshold,
        success_rate={task: success for task in tasks},
        censored=steps is None,
        steps_to_threshold=steps,
    )


def test_steps_to_threshold_first_crossing():
    assert steps_to_threshold([500, 1000, 1500], [0.2, 0.85, 0.9], 0.8) == 1000
    assert steps_to_threshold([500, 1000, 1500], [0.2, 0.85, 0.6], 0.8) == 1000


def test_steps_to_threshold_rolling_mean():
    steps = [500, 1000, 1500, 2000]
    assert steps_to_threshold(steps, [0.9, 0.5, 0.9, 0.9], 0.8, rolling=2) == 2000


def test_never_crossing_is_censored_or_strict():
    assert steps_to_threshold([500, 1000], [0.1, 0.3], 0.8) is None
    with pytest.raises(MissingThresholdCrossing):
        steps_to_threshold([500, 1000], [0.1, 0.3], 0.8, strict=True)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(0, 1), min_size=1, max_size=12),
    st.floats(0, 1),
    st.floats(0, 1),
    st.integers(1, 3),
)
def test_steps_to_threshold_monotone_in_threshold(success, a, b, rolling):
    low, high = sorted((a, b))
    steps = [500 * (i + 1) for i in range(len(success))]
    first = steps_to_threshold(steps, success, low, rolling)
    second = steps_to_threshold(steps, success, high, rolling)
    if second is not None:
        assert first is not None and first <= second


def test_compare_ranks_by_median_steps():
    reports = [
        report("random", 0, 2000, 0.8),
        report("random", 1, 3000, 0.9),
        report("in_domain", 0, 1000, 0.9),
        report("in_domain", 1, 1500, 0.8),
    ]
    rows = compare(reports, 0.8)
    assert [row["variant"] for row in rows] == ["in_domain", "random"]
    assert rows[0]["median_steps"] == 1250
    assert rows[1]["median_steps"] == 2500
    assert [row["rank"] for row in rows] == [1, 2]


def test_censored_variant_ranked_last_without_fabricated_step():
    reports = [report("out_domain", 0, None, 0.4), report("random", 0, 2500, 0.85)]
    rows = compare(reports, 0.8)
    assert rows[-1]["variant"] == "out_domain"
    assert rows[-1]["censored"] == 1
    assert rows[-1]["median_steps"] is None


def test_ties_broken_by_success_then_name():
    reports = [
        report("b", 0, 1000, 0.8),
        report("a", 0, 1000, 0.8),
        report("c", 0, 1000, 0.95),
    ]
    assert [row["variant"] for row in compare(reports, 0.8)] == ["c", "a", "b"]


def test_compare_is_pure():
    reports = [report("random", 0, 2000, 0.8), report("in_domain", 0, 1000, 0.9)]
    before = [as_dict(r) for r in reports]
    assert compare(reports, 0.8) == compare(reports, 0.8)
    assert [as_dict(r) for r in reports] == before


@pytest.mark.parametrize(
    "reports",
    [
        [],
        [report("random", 0, 1000, 0.9, threshold=0.7)],
        [report("random", 0, 1000, 0.9), report("in_domain", 0, 1000, 0.9, tasks=("stack",))],
        [report("random", 0, 1000, 0.9), report("random", 0, 1500, 0.9)],
    ],
)
def test_inconsistent_reports(reports):
    with pytest.raises(InconsistentReports):
        compare(reports, 0.8)


def test_summary_tables():
    rows = compare([report("random", 0, None, 0.4), report("in_domain", 0, 1000, 0.9)], 0.8)
    csv_text = summary_csv(rows)
    assert csv_text.splitlines()[0] == "rank,variant,seeds,censored,median_steps,mean_final_success"
    assert csv_text.splitlines()[2] == "2,random,1,1,,0.4"
    markdown = summary_markdown(rows, 0.8)
    assert markdown.startswith("Steps to 80% success")
    assert "| 1 | in_domain | 1 | 0 | 1000 | 0.9 |" in markdown


def test_matrix_config_from_section():
    cfg = MatrixConfig.from_section({"variants": "random, in_domain", "seeds": "3,4", "threshold": "0.7"})
    assert cfg.variants == ("random", "in_domain")
    assert cfg.seeds == (3, 4)
    assert cfg.threshold == 0.7
    assert cfg.eval_every == 500


def test_matrix_config_rejects_bad_values():
    with pytest.raises(ValueError):
        MatrixConfig.from_section({"warmup": "10"})
    with pytest.raises(ValueError):
        MatrixConfig(seeds=())
    with pytest.raises(UnknownVariant):
        MatrixConfig(variants=("imagenet",))


def test_expert_reference_row():
    cfg = MatrixConfig(variants=("expert",), tasks=("reach",), seeds=(0,), eval_episodes=5)
    cell = run_cell("expert", 0, cfg, SMALL)
    assert cell.report.steps_to_threshold == 0
    assert not cell.report.censored
    assert cell.report.success_rate == {"reach": 1.0}


def test_run_cell_is_reproducible():
    first = run_cell("in_domain", 0, TINY, SMALL)
    second = run_cell("in_domain", 0, TINY, SMALL)
    assert as_dict(first.report) == as_dict(second.report)
    assert first.losses == second.losses
    assert first.report.eval_steps == [2, 4]
    assert len(first.losses) == TINY.train_steps


def test_pretraining_changes_only_the_encoder():
    random_cell = run_cell("random", 0, TINY, SMALL)
    in_domain_cell = run_cell("in_domain", 0, TINY, SMALL)
    # zero-initialized head: identical first loss on identical demos and noise
    assert random_cell.losses[0] == in_domain_cell.losses[0]
    assert random_cell.losses[1:] != in_domain_cell.losses[1:]


def test_matrix_cardinality_and_order():
    cfg = replace(TINY, variants=("expert", "random", "in_domain"))
    seen = []
    cells = run_matrix(cfg, SMALL, jobs=2, on_cell=lambda cell: seen.append(cell.report.variant))
    assert [(c.report.variant, c.report.seed) for c in cells] == [
        ("expert", 0),
        ("expert", 1),
        ("random", 0),
        ("random", 1),
        ("in_domain", 0),
        ("in_domain", 1),
    ]
    assert sorted(seen) == sorted(c.report.variant for c in cells)

    top = compare([c.report for c in cells])[0]
    assert top["variant"] == "expert"
    assert top["median_steps"] == 0
    assert top["censored"] == 0


def test_bundled_matrix_includes_expert_row():
    section = read_config(django_settings.BASE_DIR / "experiments" / "matrix.cfg")["experiment"]
    cfg = MatrixConfig.from_section(section)
    assert cfg.variants == MatrixConfig().variants == ("expert", "random", "out_domain", "in_domain")
    assert cfg.lr == 1e-3
    assert cfg.seeds == (0, 1, 2, 3, 4)


def test_every_variant_is_runnable():
    for name in VARIANTS:
        cfg = MatrixConfig(
            variants=(name,),
            tasks=("reach",),
            seeds=(0,),
            eval_every=1,
            eval_episodes=1,
            train_steps=1,
            batch_size=4,
            demo_episodes=1,
            pretrain_steps=1,
            corpus_size=4,
        )
        assert run_cell(name, 0, cfg, SMALL).report.variant == name


def test_experiment_command_writes_reports(tmp_path):
    matrix = tmp_path / "matrix.cfg"
    matrix.write_text(
        "[experiment]\n"
        "variants = random\n"
        "tasks = reach\n"
        "seeds = 0\n"
        "eval_every = 1\n"
        "eval_episodes = 1\n"
        "train_steps = 2\n"
        "batch_size = 4\n"
        "demo_episodes = 1\n",
        encoding="utf-8",
    )
    out = tmp_path / "reports"
    call_command("experiment", matrix=matrix, out=out)
    cell = json.loads((out / "random__seed0.json").read_text(encoding="utf-8"))
    assert cell["eval_steps"] == [1, 2]
    assert cell["loss_curve"] == "random__seed0.loss.csv"
    assert (out / "random__seed0.loss.csv").exists()
    assert (out / "summary.csv").read_text(encoding="utf-8").startswith("rank,variant")
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["counters"]["reports"] == 1

    summary = (out / "summary.md").read_text(encoding="utf-8")
    (out / "summary.md").unlink()
    call_command("experiment", matrix=matrix, out=out, compare_only=True)
    assert (out / "summary.md").read_text(encoding="utf-8") == summary


@pytest.mark.slow
def test_in_domain_converges_no_slower_than_random():
    cfg = MatrixConfig(variants=("random", "in_domain"), tasks=("pick_place",))
    reports = [cell.report for cell in run_matrix(cfg, jobs=4)]

    def median_steps(name):
        steps = [r.steps_to_threshold or float("inf") for r in reports if r.variant == name]
        return statistics.median(steps)

    assert len(reports) == 10
    assert median_steps("in_domain") <= median_steps("random")
