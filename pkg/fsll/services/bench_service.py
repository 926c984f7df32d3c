"""
Benchmark harness: datasets x models x seeds, written as CSV files.

Each (dataset, seed) group generates its truth and sample once and fits
every model kind on it. A failing fit is recorded in its row and the run
continues.
"""

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from fsll.core.config import settings
from fsll.core.exceptions import FsllError
from fsll.models.dataset import Dataset
from fsll.models.table import DenseTable
from fsll.schemas.bench import BenchConfig, BenchDataset, BenchFamily
from fsll.schemas.generators import BayesNetSpec, IsingGridSpec
from fsll.schemas.report import ModelKind, RunReport
from fsll.services import generator_service, run_service
from fsll.utils.system import rss_mb

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.csv"
TABLE_FILE = "table.csv"
COST_TRACE_FILE = "cost_trace.csv"
KL_BARS_FILE = "kl_bars.csv"

TABLE_COLUMNS = ["dataset", "model", "kl_pd", "kl_pstar", "basis_count", "wall_ms", "trials"]


@dataclass
class CellResult:
    dataset: str
    model: ModelKind
    seed: int
    report: Optional[RunReport] = None
    costs: List[float] = field(default_factory=list)
    error: Optional[str] = None


def build_truth(dataset: BenchDataset, seed: int) -> Tuple[Union[IsingGridSpec, BayesNetSpec], DenseTable]:
    if dataset.family == BenchFamily.ISING:
        spec = IsingGridSpec(rows=dataset.rows, cols=dataset.cols)
    else:
        spec = generator_service.random_bayes_net(dataset.nodes, dataset.schedule, seed)
    return spec, generator_service.true_distribution(spec)


def _run_cell(
    name: str,
    kind: ModelKind,
    seed: int,
    data: Dataset,
    truth: DenseTable,
    config: BenchConfig,
) -> CellResult:
    result = CellResult(dataset=name, model=kind, seed=seed)
    fit_config = config.fit.model_copy(update={"seed": seed})
    pcd_config = config.pcd.model_copy(update={"seed": seed})
    try:
        model = run_service.fit_model(kind, data, fit_config, pcd_config, config.di_tolerance)
        result.report = run_service.report(model, data, name, truth, seed)
        if model.trace is not None:
            result.costs = model.trace.costs
    except (FsllError, ArithmeticError, MemoryError) as e:
        logger.error("bench cell %s / %s / seed %d failed: %s", name, kind.value, seed, e)
        result.error = f"{type(e).__name__}: {e}"
    return result


def _run_group(dataset: BenchDataset, seed: int, config: BenchConfig) -> List[CellResult]:
    name = dataset.name()
    try:
        _, truth = build_truth(dataset, seed)
        data = generator_service.sample(truth, dataset.n_samples, seed)
    except FsllError as e:
        logger.error("bench dataset %s / seed %d failed: %s", name, seed, e)
        return [
            CellResult(dataset=name, model=kind, seed=seed, error=f"{type(e).__name__}: {e}")
            for kind in config.models()
        ]
    logger.info("bench dataset %s seed %d: N=%d rss=%.1fMiB", name, seed, data.n_samples, rss_mb())
    return [_run_cell(name, kind, seed, data, truth, config) for kind in config.models()]


def run_bench(
    config: BenchConfig,
    out_dir: Union[str, Path],
    datasets: Optional[List[BenchDataset]] = None,
) -> List[CellResult]:
    """
    Run the cross-product of datasets, models and seeds and write the CSV outputs.

    ``datasets`` replaces the preset's dataset list when given.

    With ``config.parallel`` the (dataset, seed) groups run on
    ``settings.THREADS`` worker threads; results keep their sequential order.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    datasets = config.datasets() if datasets is None else datasets
    groups = [(dataset, seed) for dataset in datasets for seed in config.seeds]
    logger.info(
        "bench %s: %d datasets x %d models x %d seeds",
        config.preset.value, len(datasets), len(config.models()), len(config.seeds),
    )

    if config.parallel and settings.THREADS > 1:
        with ThreadPoolExecutor(max_workers=settings.THREADS) as executor:
            batches = list(executor.map(lambda group: _run_group(group[0], group[1], config), groups))
    else:
        batches = [_run_group(dataset, seed, config) for dataset, seed in groups]
    results = [result for batch in batches for result in batch]

    write_runs(results, out_dir / RUNS_FILE)
    table = summarize(results)
    write_table(table, out_dir / TABLE_FILE)
    write_cost_trace(results, out_dir / COST_TRACE_FILE)
    write_kl_bars(table, out_dir / KL_BARS_FILE)
    failed = sum(1 for result in results if result.error)
    logger.info("bench done: %d rows, %d failed", len(results), failed)
    return results


def summarize(results: List[CellResult]) -> List[Dict[str, object]]:
    """Median of every column over the successful seeds of each (dataset, model) cell."""
    cells: Dict[Tuple[str, ModelKind], List[RunReport]] = {}
    for result in results:
        cells.setdefault((result.dataset, result.model), [])
        if result.report is not None:
            cells[(result.dataset, result.model)].append(result.report)

    table = []
    for (dataset, model), reports in cells.items():
        row: Dict[str, object] = {"dataset": dataset, "model": model.value, "trials": len(reports)}
        if reports:
            kl_pstar = [r.kl_pstar for r in reports if r.kl_pstar is not None]
            row["kl_pd"] = float(np.median([r.kl_pd for r in reports]))
            row["kl_pstar"] = float(np.median(kl_pstar)) if kl_pstar else None
            row["basis_count"] = float(np.median([r.basis_count for r in reports]))
            row["wall_ms"] = float(np.median([r.wall_ms for r in reports]))
        table.append(row)
    return table


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_runs(results: List[CellResult], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(RunReport.columns() + ["error"])
        for result in results:
            if result.report is not None:
                writer.writerow(result.report.as_row() + [""])
            else:
                writer.writerow([result.dataset, result.model.value, "", "", "", "", str(result.seed), result.error])


def write_table(table: List[Dict[str, object]], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(TABLE_COLUMNS)
        for row in table:
            writer.writerow([_cell(row.get(column)) for column in TABLE_COLUMNS])


def write_cost_trace(results: List[CellResult], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["dataset", "seed", "iter", "cost"])
        for result in results:
            for iteration, value in enumerate(result.costs, start=1):
                writer.writerow([result.dataset, result.seed, iteration, format(value, ".17g")])


def write_kl_bars(table: List[Dict[str, object]], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["dataset", "model", "kl_pstar"])
        for row in table:
            writer.writerow([row["dataset"], row["model"], _cell(row.get("kl_pstar"))])
