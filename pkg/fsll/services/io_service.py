"""
Artifact files: datasets, FSLL and Boltzmann models, truth specs, fit traces
and report rows.

Every file is plain text. Metadata lives in leading ``# key: value`` lines,
records follow as comma-separated values. Reals are written with 17
significant digits so a write/read cycle reproduces them exactly.
"""

import csv
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from fsll.core.exceptions import FileFormatError, FsllError
from fsll.models.boltzmann import BmParams
from fsll.models.dataset import Dataset
from fsll.models.state import ModelState, SparseTheta
from fsll.schemas.fit import FitTrace
from fsll.schemas.generators import BayesNetSpec, BayesSchedule, IsingGridSpec
from fsll.schemas.report import RunReport
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import pack, unpack

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRACE_COLUMNS = ["iter", "y", "kind", "delta", "cost", "ms"]


def _real(value: float) -> str:
    return format(float(value), ".17g")


def _split_header(path: PathLike) -> Tuple[Dict[str, str], List[str]]:
    """Leading ``# key: value`` lines as a dict, and the remaining non-blank lines."""
    header: Dict[str, str] = {}
    records: List[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#") and not records:
                key, sep, value = line[1:].partition(":")
                if not sep:
                    raise FileFormatError(f"{path}: malformed header line {line!r}")
                header[key.strip()] = value.strip()
            else:
                records.append(line)
    return header, records


def _require(header: Dict[str, str], key: str, path: PathLike) -> str:
    if key not in header:
        raise FileFormatError(f"{path}: missing '# {key}:' header")
    return header[key]


def _parse_cards(text: str, path: PathLike) -> VariableSpec:
    try:
        return VariableSpec(cards=[int(c) for c in text.split(",")])
    except ValueError as e:
        raise FileFormatError(f"{path}: invalid cards header {text!r}") from e


def _check_kind(header: Dict[str, str], expected: str, path: PathLike) -> None:
    kind = header.get("kind", expected)
    if kind != expected:
        raise FileFormatError(f"{path}: expected a '{expected}' file, found '{kind}'")


def write_dataset(dataset: Dataset, path: PathLike) -> None:
    """Write ``# cards:`` then one comma-separated row per sample."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dataset.spec.header() + "\n")
        np.savetxt(handle, dataset.rows, fmt="%d", delimiter=",")


def read_dataset(path: PathLike) -> Dataset:
    """
    Read a dataset file.

    Raises:
        FileFormatError: If the header or a row is malformed or out of range
    """
    header, records = _split_header(path)
    spec = _parse_cards(_require(header, "cards", path), path)
    if not records:
        raise FileFormatError(f"{path}: no sample rows")
    try:
        rows = np.array([[int(v) for v in line.split(",")] for line in records], dtype=np.int64)
        return Dataset(spec, rows)
    except (ValueError, FsllError) as e:
        raise FileFormatError(f"{path}: {e}") from e


def write_model(model: Union[ModelState, SparseTheta], path: PathLike, spec: VariableSpec = None) -> None:
    """Write ``# kind: fsll``, ``# cards:`` and one ``y_0,...,y_{n-1},theta`` record per parameter."""
    if isinstance(model, ModelState):
        spec, theta = model.spec, model.theta
    else:
        theta = model
        if spec is None:
            raise FileFormatError("a spec is required to write bare parameters")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("# kind: fsll\n")
        handle.write(spec.header() + "\n")
        for y, value in theta.items():
            digits = ",".join(str(d) for d in unpack(y, spec))
            handle.write(f"{digits},{_real(value)}\n")


def read_model(path: PathLike) -> Tuple[VariableSpec, SparseTheta]:
    """
    Read an FSLL model file.

    Raises:
        FileFormatError: On a wrong kind, bad header, malformed or duplicate record
    """
    header, records = _split_header(path)
    _check_kind(header, "fsll", path)
    spec = _parse_cards(_require(header, "cards", path), path)
    theta = SparseTheta()
    for line in records:
        fields = line.split(",")
        if len(fields) != spec.n + 1:
            raise FileFormatError(f"{path}: expected {spec.n + 1} fields in {line!r}")
        try:
            y = pack([int(d) for d in fields[:-1]], spec)
            value = float(fields[-1])
        except (ValueError, FsllError) as e:
            raise FileFormatError(f"{path}: bad record {line!r}: {e}") from e
        if y == 0 or y in theta:
            raise FileFormatError(f"{path}: parameter {y} is reserved or appears twice")
        theta.set(y, value)
    return spec, theta


def write_bm_model(params: BmParams, path: PathLike, trainer: str = "bm-di") -> None:
    """Write ``# kind: bm``, ``# trainer:``, ``# n:`` and ``i,j,theta`` records; biases use j = n."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("# kind: bm\n")
        handle.write(f"# trainer: {trainer}\n")
        handle.write(f"# n: {params.n}\n")
        for i in range(params.n):
            for j in range(i + 1, params.n):
                handle.write(f"{i},{j},{_real(params.weights[i, j])}\n")
        for i in range(params.n):
            handle.write(f"{i},{params.n},{_real(params.biases[i])}\n")


def read_bm_model(path: PathLike) -> BmParams:
    header, records = _split_header(path)
    _check_kind(header, "bm", path)
    n_text = _require(header, "n", path)
    try:
        n = int(n_text)
        weights = np.zeros((n, n))
        biases = np.zeros(n)
        for line in records:
            i_text, j_text, value_text = line.split(",")
            i, j, value = int(i_text), int(j_text), float(value_text)
            if j == n and 0 <= i < n:
                biases[i] = value
            elif 0 <= i < j < n:
                weights[i, j] = value
            else:
                raise FileFormatError(f"{path}: pair ({i}, {j}) out of range")
        return BmParams(n, weights, biases)
    except FileFormatError:
        raise
    except (ValueError, FsllError) as e:
        raise FileFormatError(f"{path}: {e}") from e


def read_header(path: PathLike) -> Dict[str, str]:
    return _split_header(path)[0]


def read_any_model(path: PathLike) -> Union[Tuple[VariableSpec, SparseTheta], BmParams]:
    """Dispatch on the ``# kind:`` header."""
    header, _ = _split_header(path)
    if header.get("kind") == "bm":
        return read_bm_model(path)
    return read_model(path)


def write_truth(spec: Union[IsingGridSpec, BayesNetSpec], path: PathLike) -> None:
    """
    Write a truth spec.

    Ising grids are header-only; Bayesian networks add one
    ``node,parents,config,p0,p1`` record per CPT row, parents ';'-separated.
    """
    with open(path, "w", encoding="utf-8") as handle:
        if isinstance(spec, IsingGridSpec):
            handle.write("# family: ising\n")
            handle.write(f"# rows: {spec.rows}\n# cols: {spec.cols}\n# coupling: {_real(spec.coupling)}\n")
            return
        handle.write("# family: bn\n")
        handle.write(f"# n: {spec.n}\n# schedule: {spec.schedule.value}\n# seed: {spec.seed}\n")
        for node, (parents, table) in enumerate(zip(spec.parents, spec.cpts)):
            parent_text = ";".join(str(p) for p in parents)
            for config, row in enumerate(table):
                handle.write(f"{node},{parent_text},{config},{_real(row[0])},{_real(row[1])}\n")


def read_truth(path: PathLike) -> Union[IsingGridSpec, BayesNetSpec]:
    """
    Read a truth spec written by ``write_truth``.

    Raises:
        FileFormatError: On an unknown family or malformed records
    """
    header, records = _split_header(path)
    family = _require(header, "family", path)
    try:
        if family == "ising":
            return IsingGridSpec(
                rows=int(_require(header, "rows", path)),
                cols=int(_require(header, "cols", path)),
                coupling=float(header.get("coupling", "0.5")),
            )
        if family != "bn":
            raise FileFormatError(f"{path}: unknown family {family!r}")
        n = int(_require(header, "n", path))
        parents: List[List[int]] = [[] for _ in range(n)]
        cpts: List[List[List[float]]] = [[] for _ in range(n)]
        for line in records:
            node_text, parent_text, config_text, p0, p1 = line.split(",")
            node = int(node_text)
            parents[node] = [int(p) for p in parent_text.split(";") if p]
            if int(config_text) != len(cpts[node]):
                raise FileFormatError(f"{path}: CPT rows of node {node} out of order")
            cpts[node].append([float(p0), float(p1)])
        return BayesNetSpec(
            n=n,
            parents=parents,
            cpts=cpts,
            seed=int(header.get("seed", "0")),
            schedule=BayesSchedule(header.get("schedule", BayesSchedule.TWO_PARENT.value)),
        )
    except FileFormatError:
        raise
    except (ValueError, IndexError) as e:
        raise FileFormatError(f"{path}: {e}") from e


def write_trace(trace: FitTrace, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(TRACE_COLUMNS)
        for record in trace.records:
            writer.writerow(
                [record.iter, record.y, record.kind.value, _real(record.delta), _real(record.cost), f"{record.ms:.3f}"]
            )


def append_report(report: RunReport, path: PathLike) -> None:
    """Append one report row, writing the column header if the file is new or empty."""
    path = Path(path)
    is_new = not path.exists() or path.stat().st_size == 0
    with open(path, "a", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        if is_new:
            writer.writerow(RunReport.columns())
        writer.writerow(report.as_row())


def read_reports(path: PathLike) -> List[RunReport]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        try:
            return [RunReport.from_row(row) for row in csv.DictReader(handle)]
        except (KeyError, ValueError) as e:
            raise FileFormatError(f"{path}: {e}") from e
